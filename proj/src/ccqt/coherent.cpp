#include "ccqt/coherent.hpp"

#include <algorithm>
#include <cmath>
#include <set>

#include <json.hpp>

namespace ccqt::coherent {

State::State(std::vector<Mode> modes, std::vector<Term> terms)
    : modes_(std::move(modes)), terms_(std::move(terms)) {
    std::set<Mode> seen(modes_.begin(), modes_.end());
    if (seen.size() != modes_.size())
        throw mode_error("duplicate mode label in state");
    for (const auto& t : terms_) {
        if (t.amps.size() != modes_.size())
            throw mode_error("term amplitude count does not match mode set");
        if (!std::isfinite(t.weight.real()) || !std::isfinite(t.weight.imag()))
            throw std::invalid_argument("non-finite term weight");
        for (const auto& b : t.amps)
            if (!std::isfinite(b.real()) || !std::isfinite(b.imag()))
                throw std::invalid_argument("non-finite coherent amplitude");
    }
}

bool State::has_mode(Mode m) const {
    return std::find(modes_.begin(), modes_.end(), m) != modes_.end();
}

std::size_t State::mode_index(Mode m) const {
    auto it = std::find(modes_.begin(), modes_.end(), m);
    if (it == modes_.end())
        throw mode_error("mode " + m.str() + " not present in state");
    return static_cast<std::size_t>(it - modes_.begin());
}

State State::with_normalized_flag(bool f) const {
    State out = *this;
    out.normalized_ = f;
    return out;
}

State State::relabeled(Mode from, Mode to) const {
    std::size_t idx = mode_index(from);
    if (from != to && has_mode(to))
        throw mode_error("relabel target " + to.str() + " already present");
    State out = *this;
    out.modes_[idx] = to;
    return out;
}

State single_mode(Mode m, cplx beta, cplx weight) {
    return State({m}, {Term{weight, {beta}}});
}

State cat_state(Mode m, double alpha, cplx c0, cplx c1) {
    return State({m}, {Term{c0, {cplx(alpha, 0)}}, Term{c1, {cplx(-alpha, 0)}}});
}

cplx coherent_overlap(cplx beta, cplx delta) {
    const double b2 = std::norm(beta);
    const double d2 = std::norm(delta);
    return std::exp(-(cplx(b2 + d2, 0) - 2.0 * std::conj(beta) * delta) / 2.0);
}

namespace {

cplx term_overlap(const Term& a, const Term& b) {
    cplx g = 1.0;
    for (std::size_t m = 0; m < a.amps.size(); ++m)
        g *= coherent_overlap(a.amps[m], b.amps[m]);
    return g;
}

} // namespace

cplx inner_product(const State& lhs, const State& rhs) {
    if (lhs.modes() != rhs.modes())
        throw mode_error("inner product requires identical mode sets");
    cplx acc = 0.0;
    for (const auto& ta : lhs.terms())
        for (const auto& tb : rhs.terms())
            acc += std::conj(ta.weight) * tb.weight * term_overlap(ta, tb);
    return acc;
}

double norm_sq(const State& s) {
    const std::size_t n = s.term_count();
    // Hermitian Gram sum; fold conjugate pairs so only the upper triangle
    // is evaluated.
    double acc = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const auto& ti = s.terms()[i];
        acc += std::norm(ti.weight) * term_overlap(ti, ti).real();
        for (std::size_t j = i + 1; j < n; ++j) {
            const auto& tj = s.terms()[j];
            acc += 2.0 * (std::conj(ti.weight) * tj.weight * term_overlap(ti, tj)).real();
        }
    }
    return acc;
}

std::vector<cplx> gram_matrix(const State& s) {
    const std::size_t n = s.term_count();
    std::vector<cplx> g(n * n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j)
            g[i * n + j] = term_overlap(s.terms()[i], s.terms()[j]);
    return g;
}

State normalized(const State& s) {
    const double n2 = norm_sq(s);
    if (n2 <= kZeroNormTol)
        throw zero_norm_error("cannot normalize state with squared norm " + std::to_string(n2));
    const double inv = 1.0 / std::sqrt(n2);
    std::vector<Term> terms = s.terms();
    for (auto& t : terms) t.weight *= inv;
    return State(s.modes(), std::move(terms)).with_normalized_flag(true);
}

State tensor(const State& lhs, const State& rhs) {
    std::vector<Mode> modes = lhs.modes();
    for (Mode m : rhs.modes()) {
        if (lhs.has_mode(m))
            throw mode_error("tensor operands share mode " + m.str());
        modes.push_back(m);
    }
    std::vector<Term> terms;
    terms.reserve(lhs.term_count() * rhs.term_count());
    for (const auto& ta : lhs.terms())
        for (const auto& tb : rhs.terms()) {
            Term t;
            t.weight = ta.weight * tb.weight;
            t.amps = ta.amps;
            t.amps.insert(t.amps.end(), tb.amps.begin(), tb.amps.end());
            terms.push_back(std::move(t));
        }
    return State(std::move(modes), std::move(terms));
}

State apply_bps(const State& s, Mode u, Mode v, Mode i, Mode j) {
    const std::size_t iu = s.mode_index(u);
    const std::size_t iv = s.mode_index(v);
    if (iu == iv) throw mode_error("bps input modes must differ");
    if (i == j) throw mode_error("bps output modes must differ");
    for (Mode out : {i, j})
        if (out != u && out != v && s.has_mode(out))
            throw mode_error("bps output label " + out.str() + " collides with existing mode");

    std::vector<Mode> modes = s.modes();
    modes[iu] = i;
    modes[iv] = j;
    static const double inv_sqrt2 = 1.0 / std::sqrt(2.0);
    std::vector<Term> terms = s.terms();
    for (auto& t : terms) {
        const cplx bu = t.amps[iu], bv = t.amps[iv];
        t.amps[iu] = (bu + bv) * inv_sqrt2;
        t.amps[iv] = (bu - bv) * inv_sqrt2;
    }
    return State(std::move(modes), std::move(terms)).with_normalized_flag(s.normalized_flag());
}

State phase_shift(const State& s, Mode m, double theta) {
    const std::size_t idx = s.mode_index(m);
    const cplx rot = std::exp(cplx(0, -theta));
    std::vector<Term> terms = s.terms();
    for (auto& t : terms) t.amps[idx] *= rot;
    return State(s.modes(), std::move(terms)).with_normalized_flag(s.normalized_flag());
}

State displace(const State& s, Mode m, cplx delta) {
    const std::size_t idx = s.mode_index(m);
    std::vector<Term> terms = s.terms();
    for (auto& t : terms) {
        const cplx b = t.amps[idx];
        t.weight *= std::exp((delta * std::conj(b) - std::conj(delta) * b) / 2.0);
        t.amps[idx] = b + delta;
    }
    return State(s.modes(), std::move(terms)).with_normalized_flag(s.normalized_flag());
}

cplx fock_kernel(int n, cplx beta) {
    cplx k = std::exp(cplx(-std::norm(beta) / 2.0, 0));
    for (int q = 1; q <= n; ++q) k *= beta / std::sqrt(double(q));
    return k;
}

State project_fock(const State& s, Mode m, int n) {
    if (n < 0) throw std::invalid_argument("photon count must be non-negative");
    const std::size_t idx = s.mode_index(m);
    std::vector<Mode> modes = s.modes();
    modes.erase(modes.begin() + idx);
    std::vector<Term> terms = s.terms();
    for (auto& t : terms) {
        t.weight *= fock_kernel(n, t.amps[idx]);
        t.amps.erase(t.amps.begin() + idx);
    }
    return State(std::move(modes), std::move(terms));
}

State prune(const State& s, double tol) {
    if (tol < 0) throw std::invalid_argument("prune tolerance must be >= 0");
    std::vector<Term> merged;
    for (const auto& t : s.terms()) {
        bool found = false;
        for (auto& u : merged) {
            bool same = true;
            for (std::size_t m = 0; m < t.amps.size(); ++m) {
                if (std::abs(t.amps[m].real() - u.amps[m].real()) > kMergeTol ||
                    std::abs(t.amps[m].imag() - u.amps[m].imag()) > kMergeTol) {
                    same = false;
                    break;
                }
            }
            if (same) {
                u.weight += t.weight;
                found = true;
                break;
            }
        }
        if (!found) merged.push_back(t);
    }
    if (tol > 0) {
        std::vector<Term> kept;
        for (auto& t : merged) {
            double bmax = 0.0;
            for (const auto& b : t.amps) bmax = std::max(bmax, std::norm(b));
            if (std::abs(t.weight) * std::exp(bmax / 2.0) >= tol)
                kept.push_back(std::move(t));
        }
        merged = std::move(kept);
    }
    return State(s.modes(), std::move(merged));
}

std::string to_json(const State& s) {
    nlohmann::json j;
    j["modes"] = nlohmann::json::array();
    for (Mode m : s.modes()) j["modes"].push_back(m.str());
    j["terms"] = nlohmann::json::array();
    for (const auto& t : s.terms()) {
        nlohmann::json jt;
        jt["w"] = {t.weight.real(), t.weight.imag()};
        jt["beta"] = nlohmann::json::array();
        for (const auto& b : t.amps) jt["beta"].push_back({b.real(), b.imag()});
        j["terms"].push_back(std::move(jt));
    }
    return j.dump();
}

State from_json(const std::string& text) {
    const auto j = nlohmann::json::parse(text);
    std::vector<Mode> modes;
    for (const auto& jm : j.at("modes")) {
        const std::string s = jm.get<std::string>();
        if (s.size() == 1 && s[0] >= 'a' && s[0] <= 'c')
            modes.push_back(Mode::letter(s[0]));
        else
            modes.push_back(Mode::index(std::stoi(s)));
    }
    std::vector<Term> terms;
    for (const auto& jt : j.at("terms")) {
        Term t;
        t.weight = cplx(jt.at("w")[0].get<double>(), jt.at("w")[1].get<double>());
        for (const auto& jb : jt.at("beta"))
            t.amps.emplace_back(jb[0].get<double>(), jb[1].get<double>());
        terms.push_back(std::move(t));
    }
    return State(std::move(modes), std::move(terms));
}

} // namespace ccqt::coherent
