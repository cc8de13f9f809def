#include "ccqt/protocol.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <ostream>

#include <Eigen/Dense>
#include <json.hpp>

namespace ccqt::protocol {

namespace {

using coherent::cat_state;
using coherent::inner_product;
using coherent::norm_sq;
using coherent::normalized;
using coherent::single_mode;

const Mode kInfoMode[3] = {Mode::letter('a'), Mode::letter('b'), Mode::letter('c')};

Mode det_mode(int k, int side) { return Mode::index(7 + 2 * k + side); }
Mode recv_mode(int k) { return Mode::index(4 + k); }
Mode chan_mode(int k) { return Mode::index(1 + k); }

std::string fmt(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.12g", v);
    return buf;
}

} // namespace

State prepare_bell_pair(double alpha, Mode i, Mode j) {
    if (!(alpha > 0)) throw std::invalid_argument("alpha must be > 0");
    State cat = cat_state(i, std::sqrt(2.0) * alpha, 1.0, 1.0);
    State vac = single_mode(j, 0.0);
    State mixed = apply_bps(tensor(cat, vac), i, j, i, j);
    return normalized(mixed);
}

State prepare_channel(double alpha) {
    State ch = prepare_bell_pair(alpha, chan_mode(0), recv_mode(0));
    ch = tensor(ch, prepare_bell_pair(alpha, chan_mode(1), recv_mode(1)));
    ch = tensor(ch, prepare_bell_pair(alpha, chan_mode(2), recv_mode(2)));
    return normalized(ch);
}

std::array<State, 3> prepare_info_states(const Params& p) {
    p.validate();
    std::array<State, 3> out = {
        normalized(cat_state(kInfoMode[0], p.alpha, p.info_coeff(0)[0], p.info_coeff(0)[1])),
        normalized(cat_state(kInfoMode[1], p.alpha, p.info_coeff(1)[0], p.info_coeff(1)[1])),
        normalized(cat_state(kInfoMode[2], p.alpha, p.info_coeff(2)[0], p.info_coeff(2)[1])),
    };
    return out;
}

State prepare_global(const Params& p) {
    auto info = prepare_info_states(p);
    State g = tensor(tensor(info[0], info[1]), info[2]);
    g = tensor(g, prepare_channel(p.alpha));
    return g.with_normalized_flag(true);
}

State mix_network(const State& global) {
    State s = global;
    for (int k = 0; k < 3; ++k)
        s = apply_bps(s, kInfoMode[k], chan_mode(k), det_mode(k, 0), det_mode(k, 1));
    return s;
}

HeraldedOutcome herald(const State& postmix, const DetectionEvent& event) {
    HeraldedOutcome out;
    out.event = event;
    out.cls = classify_event(event);
    State s = postmix;
    for (int k = 0; k < 3; ++k)
        for (int side = 0; side < 2; ++side)
            s = project_fock(s, det_mode(k, side), event.n[static_cast<std::size_t>(2 * k + side)]);
    s = prune(s, 0.0);
    out.raw = s;
    out.probability = std::max(0.0, norm_sq(s));
    out.flagged_zero = out.probability < coherent::kZeroNormTol;
    return out;
}

namespace {

// 0 -> +alpha, 1 -> -alpha; -1 when the amplitude is neither
int sign_slot(cplx beta, double alpha) {
    if (std::abs(beta - cplx(alpha, 0)) < 1e-9) return 0;
    if (std::abs(beta - cplx(-alpha, 0)) < 1e-9) return 1;
    return -1;
}

} // namespace

FactoredState factorize(const State& raw, double alpha) {
    std::array<std::size_t, 3> col{};
    for (int k = 0; k < 3; ++k) col[static_cast<std::size_t>(k)] = raw.mode_index(recv_mode(k));

    cplx c[2][2][2] = {};
    for (const auto& t : raw.terms()) {
        int s[3];
        for (int k = 0; k < 3; ++k) {
            s[k] = sign_slot(t.amps[col[static_cast<std::size_t>(k)]], alpha);
            if (s[k] < 0)
                throw std::runtime_error("heralded amplitude is not +-alpha on mode " +
                                         recv_mode(k).str());
        }
        c[s[0]][s[1]][s[2]] += t.weight;
    }

    double cmax = 0.0;
    int T[3] = {0, 0, 0};
    for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j)
            for (int k = 0; k < 2; ++k)
                if (std::abs(c[i][j][k]) > cmax) {
                    cmax = std::abs(c[i][j][k]);
                    T[0] = i; T[1] = j; T[2] = k;
                }
    if (cmax == 0.0) throw std::runtime_error("cannot factorize a zero state");

    FactoredState f;
    const cplx ref = c[T[0]][T[1]][T[2]];
    for (int t = 0; t < 2; ++t) {
        f.g[0][static_cast<std::size_t>(t)] = c[t][T[1]][T[2]];
        f.g[1][static_cast<std::size_t>(t)] = c[T[0]][t][T[2]] / ref;
        f.g[2][static_cast<std::size_t>(t)] = c[T[0]][T[1]][t] / ref;
    }
    for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j)
            for (int k = 0; k < 2; ++k) {
                const cplx rec = f.g[0][static_cast<std::size_t>(i)] *
                                 f.g[1][static_cast<std::size_t>(j)] *
                                 f.g[2][static_cast<std::size_t>(k)];
                f.residual = std::max(f.residual, std::abs(rec - c[i][j][k]));
            }
    if (f.residual > 1e-10 * cmax)
        throw std::runtime_error("heralded state does not factorize (residual " +
                                 fmt(f.residual) + ")");
    return f;
}

std::vector<double> schmidt_values(const State& raw, double alpha, int lone_mode) {
    std::array<std::size_t, 3> col{};
    for (int k = 0; k < 3; ++k) col[static_cast<std::size_t>(k)] = raw.mode_index(recv_mode(k));

    Eigen::Matrix<cplx, 2, 4> m = Eigen::Matrix<cplx, 2, 4>::Zero();
    for (const auto& t : raw.terms()) {
        int s[3];
        for (int k = 0; k < 3; ++k)
            s[k] = sign_slot(t.amps[col[static_cast<std::size_t>(k)]], alpha);
        int others[2], oi = 0;
        for (int k = 0; k < 3; ++k)
            if (k != lone_mode) others[oi++] = s[k];
        m(s[lone_mode], others[0] * 2 + others[1]) += t.weight;
    }

    const double g = std::exp(-2.0 * alpha * alpha);
    Eigen::Matrix2d g1;
    g1 << 1.0, g, g, 1.0;
    Eigen::Matrix4d g2 = Eigen::Matrix4d::Zero();
    for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 4; ++j)
            g2(i, j) = g1(i / 2, j / 2) * g1(i % 2, j % 2);

    Eigen::Matrix2d l1 = g1.llt().matrixL();
    Eigen::Matrix4d l2 = g2.llt().matrixL();
    Eigen::Matrix<cplx, 2, 4> x = l1.transpose().cast<cplx>() * m * l2.cast<cplx>();
    Eigen::JacobiSVD<Eigen::Matrix<cplx, 2, 4>> svd(x);
    return {svd.singularValues()(0), svd.singularValues()(1)};
}

namespace {

State correction_applied(const State& factor, const std::vector<CorrectionOp>& ops,
                         int k, double alpha) {
    State s = factor;
    for (CorrectionOp op : ops) {
        if (op == CorrectionOp::Phase)
            s = phase_shift(s, recv_mode(k), M_PI);
        else
            s = displace(s, recv_mode(k), cplx(0, M_PI / (2.0 * alpha)));
    }
    return s;
}

} // namespace

CorrectedOutcome apply_correction(const HeraldedOutcome& outcome,
                                  const CorrectionPlan& plan, const Params& p) {
    const FactoredState f = factorize(outcome.raw, p.alpha);
    const auto info = prepare_info_states(p);
    CorrectedOutcome out;
    for (int k = 0; k < 3; ++k) {
        State factor(std::vector<Mode>{recv_mode(k)},
                     {coherent::Term{f.g[static_cast<std::size_t>(k)][0], {cplx(p.alpha, 0)}},
                      coherent::Term{f.g[static_cast<std::size_t>(k)][1], {cplx(-p.alpha, 0)}}});
        State corrected = normalized(
            correction_applied(factor, plan.ops[static_cast<std::size_t>(k)], k, p.alpha));
        const State target = info[static_cast<std::size_t>(k)].relabeled(kInfoMode[k], recv_mode(k));
        out.fidelity[static_cast<std::size_t>(k)] = std::norm(inner_product(target, corrected));
        out.corrected[static_cast<std::size_t>(k)] = std::move(corrected);
    }
    return out;
}

namespace {

std::vector<std::pair<int, int>> support_outcomes(int cutoff) {
    std::vector<std::pair<int, int>> out;
    out.reserve(static_cast<std::size_t>(2 * cutoff + 1));
    out.emplace_back(0, 0);
    for (int n = 1; n <= cutoff; ++n) out.emplace_back(0, n);
    for (int n = 1; n <= cutoff; ++n) out.emplace_back(n, 0);
    std::sort(out.begin(), out.end());
    return out;
}

} // namespace

Enumeration enumerate_outcomes(const Params& p, const EnumerateOptions& opt) {
    p.validate();
    Enumeration e;
    e.params = p;
    e.cutoff = p.effective_cutoff();

    const auto info = prepare_info_states(p);
    const auto outcomes = support_outcomes(e.cutoff);

    std::array<double, 3> pair_total{};
    for (int k = 0; k < 3; ++k) {
        const State bell = prepare_bell_pair(p.alpha, chan_mode(k), recv_mode(k));
        const State mixed = apply_bps(tensor(info[static_cast<std::size_t>(k)], bell),
                                      kInfoMode[k], chan_mode(k), det_mode(k, 0), det_mode(k, 1));
        const State target = info[static_cast<std::size_t>(k)].relabeled(kInfoMode[k], recv_mode(k));
        auto& table = e.pair_tables[static_cast<std::size_t>(k)];
        table.reserve(outcomes.size());
        for (auto [n1, n2] : outcomes) {
            PairOutcome po;
            po.n1 = n1;
            po.n2 = n2;
            if (n1 == 0 && n2 == 0) po.port = PairPort::Silent;
            else if (n1 > 0) { po.port = PairPort::Sum; po.parity = n1 % 2; }
            else { po.port = PairPort::Diff; po.parity = n2 % 2; }

            State h = prune(project_fock(project_fock(mixed, det_mode(k, 0), n1),
                                         det_mode(k, 1), n2), 0.0);
            po.q = std::max(0.0, norm_sq(h));
            po.g = {cplx(0), cplx(0)};
            for (const auto& t : h.terms()) {
                const int slot = sign_slot(t.amps[0], p.alpha);
                if (slot < 0) throw std::runtime_error("pair residue amplitude is not +-alpha");
                po.g[static_cast<std::size_t>(slot)] += t.weight;
            }
            if (opt.with_fidelities) {
                if (po.q < 1e-28) {
                    po.fidelity = std::numeric_limits<double>::quiet_NaN();
                } else {
                    std::vector<CorrectionOp> ops;
                    if (po.port == PairPort::Diff) ops.push_back(CorrectionOp::Phase);
                    if (po.parity) ops.push_back(CorrectionOp::Displace);
                    State corrected = normalized(correction_applied(h, ops, k, p.alpha));
                    po.fidelity = std::norm(inner_product(target, corrected));
                }
            }
            pair_total[static_cast<std::size_t>(k)] += po.q;
            table.push_back(std::move(po));
        }
    }
    e.tail_bound = 1.0 - pair_total[0] * pair_total[1] * pair_total[2];

    const auto& t0 = e.pair_tables[0];
    const auto& t1 = e.pair_tables[1];
    const auto& t2 = e.pair_tables[2];
    if (opt.keep_rows) e.rows.reserve(t0.size() * t1.size() * t2.size());
    for (const auto& a : t0)
        for (const auto& b : t1)
            for (const auto& c : t2) {
                const double prob = a.q * b.q * c.q;
                const bool silent = a.port == PairPort::Silent || b.port == PairPort::Silent ||
                                    c.port == PairPort::Silent;
                CaseId id = CaseId::Ambiguous;
                if (!silent) id = case_of_ports({a.port, b.port, c.port});
                e.total_mass += prob;
                if (silent)
                    e.ambiguous_mass += prob;
                else
                    e.case_mass[static_cast<std::size_t>(id) - 1] += prob;
                if (!opt.keep_rows) continue;
                OutcomeRow row;
                row.event = DetectionEvent{{a.n1, a.n2, b.n1, b.n2, c.n1, c.n2}};
                row.id = id;
                row.parity = {a.parity, b.parity, c.parity};
                row.probability = prob;
                row.fidelity = {a.fidelity, b.fidelity, c.fidelity};
                row.faithful = !silent && a.parity == 0 && b.parity == 0 && c.parity == 0;
                e.rows.push_back(row);
            }
    return e;
}

double class_mass(const Enumeration& e, CaseId id, int parity_row) {
    const auto ports = ports_of_case(id);
    const auto parity = parity_of_row(parity_row);
    double mass = 1.0;
    for (int k = 0; k < 3; ++k) {
        double s = 0.0;
        for (const auto& po : e.pair_tables[static_cast<std::size_t>(k)])
            if (po.port == ports[static_cast<std::size_t>(k)] &&
                po.parity == parity[static_cast<std::size_t>(k)])
                s += po.q;
        mass *= s;
    }
    return mass;
}

double class_fidelity(const Enumeration& e, CaseId id, int parity_row, int leg) {
    const auto ports = ports_of_case(id);
    const auto parity = parity_of_row(parity_row);
    for (const auto& po : e.pair_tables[static_cast<std::size_t>(leg)])
        if (po.port == ports[static_cast<std::size_t>(leg)] &&
            po.parity == parity[static_cast<std::size_t>(leg)])
            return po.fidelity;
    throw std::runtime_error("no pair outcome in class");
}

namespace {

std::string parity_str(const std::array<int, 3>& parity, const std::array<PairPort, 3>& ports) {
    std::string s;
    for (int k = 0; k < 3; ++k) {
        if (ports[static_cast<std::size_t>(k)] == PairPort::Silent) s += '-';
        else s += parity[static_cast<std::size_t>(k)] ? 'O' : 'E';
    }
    return s;
}

} // namespace

void write_outcomes_csv(const Enumeration& e, std::ostream& os) {
    os << "n7,n8,n9,n10,n11,n12,case,parities,probability,F_A->B,F_B->C,F_C->A,faithful\n";
    for (const auto& r : e.rows) {
        std::array<PairPort, 3> ports{};
        for (int k = 0; k < 3; ++k) {
            const int n1 = r.event.n[static_cast<std::size_t>(2 * k)];
            const int n2 = r.event.n[static_cast<std::size_t>(2 * k + 1)];
            ports[static_cast<std::size_t>(k)] = n1 == 0 && n2 == 0 ? PairPort::Silent
                                               : n1 > 0 ? PairPort::Sum : PairPort::Diff;
        }
        for (int i = 0; i < 6; ++i) os << r.event.n[static_cast<std::size_t>(i)] << ',';
        os << to_string(r.id) << ',' << parity_str(r.parity, ports) << ',' << fmt(r.probability)
           << ',' << fmt(r.fidelity[0]) << ',' << fmt(r.fidelity[1]) << ',' << fmt(r.fidelity[2])
           << ',' << (r.faithful ? "true" : "false") << '\n';
    }
    os << "TOTAL,,,,,,,," << fmt(e.total_mass) << ",,,,\n";
    os << "AMBIGUOUS,,,,,,,," << fmt(e.ambiguous_mass) << ",,,,\n";
}

void write_outcomes_json(const Enumeration& e, std::ostream& os) {
    nlohmann::json j;
    j["alpha"] = e.params.alpha;
    j["theta"] = e.params.theta;
    j["cutoff"] = e.cutoff;
    j["total_mass"] = e.total_mass;
    j["ambiguous_mass"] = e.ambiguous_mass;
    j["case_mass"] = e.case_mass;
    j["rows"] = nlohmann::json::array();
    for (const auto& r : e.rows) {
        nlohmann::json jr;
        jr["event"] = r.event.n;
        jr["case"] = to_string(r.id);
        jr["parity"] = r.parity;
        jr["probability"] = r.probability;
        jr["fidelity"] = r.fidelity;
        jr["faithful"] = r.faithful;
        j["rows"].push_back(std::move(jr));
    }
    os << j.dump(2) << '\n';
}

} // namespace ccqt::protocol
