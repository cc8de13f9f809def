#include "ccqt/fock.hpp"

#include <cmath>
#include <limits>

#include <Eigen/Dense>

#include "ccqt/kernels.hpp"

namespace ccqt::fock {

using kernels::dot_conj;

double FockVector::norm_sq() const {
    return kernels::norm_sq(coeffs.data(), coeffs.size());
}

double coherent_tail(double abs_beta_sq, int d) {
    if (abs_beta_sq == 0.0) return 0.0;
    // 1 - sum_{n<d} Poisson(mu) suffers cancellation once the tail is tiny;
    // sum the tail directly instead, starting from the n=d term.
    double logterm = -abs_beta_sq + d * std::log(abs_beta_sq);
    for (int q = 1; q <= d; ++q) logterm -= std::log(double(q));
    double term = std::exp(logterm);
    double tail = 0.0;
    for (int n = d; n < d + 2000 && term > 0.0; ++n) {
        tail += term;
        term *= abs_beta_sq / double(n + 1);
        if (term < tail * 1e-18 && n > d + 4) break;
    }
    return tail;
}

int suggest_dim(double abs_beta, double tail_budget) {
    const double mu = abs_beta * abs_beta;
    int d = std::max(2, int(std::ceil(mu)));
    while (coherent_tail(mu, d) >= tail_budget && d < 4000) ++d;
    return d;
}

int default_dim(double beta_max) {
    return static_cast<int>(std::ceil(beta_max * beta_max + 8.0 * beta_max + 12.0));
}

FockVector coherent_to_fock(cplx beta, int d, double tail_budget) {
    if (d < 1) throw std::invalid_argument("fock dimension must be >= 1");
    const double tail = coherent_tail(std::norm(beta), d);
    if (tail >= tail_budget)
        throw tail_budget_error("coherent truncation tail " + std::to_string(tail) +
                                    " exceeds budget at dim " + std::to_string(d),
                                suggest_dim(std::abs(beta), tail_budget));
    FockVector v;
    v.dim = d;
    v.coeffs.resize(static_cast<std::size_t>(d));
    cplx c = std::exp(cplx(-std::norm(beta) / 2.0, 0));
    for (int n = 0; n < d; ++n) {
        v.coeffs[static_cast<std::size_t>(n)] = c;
        c *= beta / std::sqrt(double(n + 1));
    }
    return v;
}

cplx dot(const FockVector& x, const FockVector& y) {
    if (x.coeffs.size() != y.coeffs.size())
        throw std::invalid_argument("fock vector size mismatch");
    return dot_conj(x.coeffs.data(), y.coeffs.data(), x.coeffs.size());
}

BeamSplitterUnitary::BeamSplitterUnitary(int d) : d_(d) {
    if (d < 2) throw std::invalid_argument("beam splitter needs dim >= 2");
    blocks_.reserve(static_cast<std::size_t>(2 * d - 1));
    for (int ntot = 0; ntot <= 2 * (d - 1); ++ntot) {
        Block blk;
        blk.ntot = ntot;
        blk.kmin = std::max(0, ntot - (d - 1));
        const int kmax = std::min(d - 1, ntot);
        const int m = kmax - blk.kmin + 1;
        Eigen::MatrixXd t = Eigen::MatrixXd::Zero(m, m);
        for (int i = 0; i + 1 < m; ++i) {
            const int k = blk.kmin + i;
            const double g = (M_PI / 4.0) * std::sqrt(double(k + 1) * double(ntot - k));
            t(i, i + 1) = t(i + 1, i) = g;
        }
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(t);
        blk.eigs.assign(es.eigenvalues().data(), es.eigenvalues().data() + m);
        // store V^T row-major (that is Eigen's column-major buffer as-is)
        // followed by V row-major
        blk.evecs.resize(static_cast<std::size_t>(2 * m * m));
        const Eigen::MatrixXd& v = es.eigenvectors();
        for (int col = 0; col < m; ++col)
            for (int row = 0; row < m; ++row) {
                blk.evecs[static_cast<std::size_t>(col * m + row)] = v(row, col);           // V^T
                blk.evecs[static_cast<std::size_t>(m * m + row * m + col)] = v(row, col);   // V
            }
        blocks_.push_back(std::move(blk));
    }
}

FockVector BeamSplitterUnitary::apply(const FockVector& v) const {
    if (v.dim != d_ || v.coeffs.size() != static_cast<std::size_t>(d_) * d_)
        throw std::invalid_argument("beam splitter expects a two-mode vector of matching dim");
    FockVector out;
    out.dim = d_;
    out.coeffs.assign(static_cast<std::size_t>(d_) * d_, cplx(0));
    static const cplx ipow[4] = {{1, 0}, {0, 1}, {-1, 0}, {0, -1}};
    std::vector<cplx> x, y;
    for (const Block& blk : blocks_) {
        const int m = static_cast<int>(blk.eigs.size());
        x.resize(static_cast<std::size_t>(m));
        y.resize(static_cast<std::size_t>(m));
        for (int i = 0; i < m; ++i) {
            const int k = blk.kmin + i;
            // gather and undo the i^k gauge: multiply by conj(i^k)
            x[static_cast<std::size_t>(i)] =
                v.coeffs[static_cast<std::size_t>(k) * d_ + (blk.ntot - k)] *
                std::conj(ipow[k & 3]);
        }
        const double* vt = blk.evecs.data();
        const double* vm = blk.evecs.data() + static_cast<std::size_t>(m) * m;
        kernels::matvec_real(vt, x.data(), y.data(), m, m);
        for (int i = 0; i < m; ++i)
            y[static_cast<std::size_t>(i)] *= std::exp(cplx(0, -blk.eigs[static_cast<std::size_t>(i)]));
        kernels::matvec_real(vm, y.data(), x.data(), m, m);
        for (int i = 0; i < m; ++i) {
            const int k = blk.kmin + i;
            const int nj = blk.ntot - k;
            cplx ph = ipow[k & 3];
            if (nj & 1) ph = -ph;  // parity phase on the difference port
            out.coeffs[static_cast<std::size_t>(k) * d_ + nj] = x[static_cast<std::size_t>(i)] * ph;
        }
    }
    return out;
}

double BeamSplitterUnitary::unitarity_defect() const {
    double worst = 0.0;
    for (const Block& blk : blocks_) {
        const int m = static_cast<int>(blk.eigs.size());
        const double* vt = blk.evecs.data();
        for (int i = 0; i < m; ++i)
            for (int j = 0; j < m; ++j) {
                double s = 0.0;
                for (int k = 0; k < m; ++k)
                    s += vt[i * m + k] * vt[j * m + k];
                worst = std::max(worst, std::abs(s - (i == j ? 1.0 : 0.0)));
            }
    }
    return worst;
}

std::vector<cplx> BeamSplitterUnitary::to_dense() const {
    const std::size_t n = static_cast<std::size_t>(d_) * d_;
    std::vector<cplx> u(n * n, cplx(0));
    FockVector e;
    e.dim = d_;
    for (std::size_t col = 0; col < n; ++col) {
        e.coeffs.assign(n, cplx(0));
        e.coeffs[col] = 1.0;
        FockVector ue = apply(e);
        for (std::size_t row = 0; row < n; ++row) u[row * n + col] = ue.coeffs[row];
    }
    return u;
}

double BeamSplitterUnitary::total_photons(const FockVector& v) {
    const int d = v.dim;
    double num = 0.0, den = 0.0;
    for (int n1 = 0; n1 < d; ++n1)
        for (int n2 = 0; n2 < d; ++n2) {
            const double p = std::norm(v.coeffs[static_cast<std::size_t>(n1) * d + n2]);
            num += p * (n1 + n2);
            den += p;
        }
    return num / den;
}

namespace {

FockVector kron(const FockVector& a, const FockVector& b) {
    FockVector out;
    out.dim = a.dim;
    out.coeffs.resize(a.coeffs.size() * b.coeffs.size());
    std::size_t idx = 0;
    for (const cplx& x : a.coeffs) {
        for (const cplx& y : b.coeffs) out.coeffs[idx++] = x * y;
    }
    return out;
}

} // namespace

double bs_pair_infidelity(cplx a, cplx b, int d) {
    BeamSplitterUnitary u(d);
    const double budget = 1e-10;  // loose gate; accuracy asserted by caller
    FockVector in = kron(coherent_to_fock(a, d, budget), coherent_to_fock(b, d, budget));
    FockVector out = u.apply(in);
    static const double inv_sqrt2 = 1.0 / std::sqrt(2.0);
    FockVector target = kron(coherent_to_fock((a + b) * inv_sqrt2, d, budget),
                             coherent_to_fock((a - b) * inv_sqrt2, d, budget));
    const cplx ov = dot(target, out);
    return 1.0 - std::norm(ov) / (target.norm_sq() * out.norm_sq());
}

std::vector<cplx> displacement_matrix(cplx delta, int d) {
    // H = i(delta a+ - conj(delta) a) is Hermitian; U = exp(-i H)
    Eigen::MatrixXcd h = Eigen::MatrixXcd::Zero(d, d);
    for (int n = 0; n + 1 < d; ++n) {
        h(n + 1, n) = cplx(0, 1) * delta * std::sqrt(double(n + 1));
        h(n, n + 1) = std::conj(h(n + 1, n));
    }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(h);
    Eigen::VectorXcd phases(d);
    for (int i = 0; i < d; ++i) phases(i) = std::exp(cplx(0, -es.eigenvalues()(i)));
    Eigen::MatrixXcd u = es.eigenvectors() * phases.asDiagonal() * es.eigenvectors().adjoint();
    std::vector<cplx> out(static_cast<std::size_t>(d) * d);
    for (int r = 0; r < d; ++r)
        for (int c = 0; c < d; ++c) out[static_cast<std::size_t>(r) * d + c] = u(r, c);
    return out;
}

OracleRun::OracleRun(double alpha, const std::array<double, 2>& a,
                     const std::array<double, 2>& b, const std::array<double, 2>& c,
                     int d, double tail_budget)
    : alpha_(alpha), d_(d), tail_budget_(tail_budget), coeff_{a, b, c} {
    init(coeff_);
}

OracleRun::OracleRun(double alpha, const std::array<double, 3>& thetas, int d,
                     double tail_budget)
    : alpha_(alpha), d_(d), tail_budget_(tail_budget),
      coeff_{{{std::cos(thetas[0]), std::sin(thetas[0])},
              {std::cos(thetas[1]), std::sin(thetas[1])},
              {std::cos(thetas[2]), std::sin(thetas[2])}}} {
    init(coeff_);
}

void OracleRun::init(const std::array<std::array<double, 2>, 3>& coeff) {
    if (alpha_ <= 0) throw std::invalid_argument("alpha must be > 0");
    // worst-case amplitude after mixing is sqrt(2)*alpha on a detector mode
    const double beta_max = std::sqrt(2.0) * alpha_;
    const double tail = coherent_tail(beta_max * beta_max, d_);
    if (tail >= tail_budget_)
        throw tail_budget_error("oracle truncation tail " + std::to_string(tail) +
                                    " exceeds budget at dim " + std::to_string(d_),
                                suggest_dim(beta_max, tail_budget_));

    vplus_ = coherent_to_fock(cplx(alpha_, 0), d_, tail_budget_);
    vminus_ = coherent_to_fock(cplx(-alpha_, 0), d_, tail_budget_);
    gram_pm_ = dot(vplus_, vminus_);

    BeamSplitterUnitary u(d_);
    block_[0] = u.apply(kron(vplus_, vplus_));
    block_[1] = u.apply(kron(vplus_, vminus_));
    block_[2] = u.apply(kron(vminus_, vplus_));
    block_[3] = u.apply(kron(vminus_, vminus_));

    FockVector bell = kron(vplus_, vplus_);
    kernels::axpy(1.0, kron(vminus_, vminus_).coeffs.data(), bell.coeffs.data(),
                  bell.coeffs.size());
    bell_norm_ = 1.0 / std::sqrt(bell.norm_sq());

    for (int k = 0; k < 3; ++k) {
        const auto& cc = coeff[static_cast<std::size_t>(k)];
        FockVector info = vplus_;
        kernels::scale(cc[0], info.coeffs.data(), info.coeffs.size());
        kernels::axpy(cc[1], vminus_.coeffs.data(), info.coeffs.data(), info.coeffs.size());
        info_norm_[static_cast<std::size_t>(k)] = 1.0 / std::sqrt(info.norm_sq());
    }

    // corrected-leg dot tables: variant 0=I, 1=P, 2=D, 3=DP
    const std::vector<cplx> disp = displacement_matrix(cplx(0, M_PI / (2 * alpha_)), d_);
    std::array<FockVector, 4> cplus, cminus;
    auto parity_flip = [&](const FockVector& v) {
        FockVector out = v;
        for (int n = 1; n < d_; n += 2) out.coeffs[static_cast<std::size_t>(n)] = -out.coeffs[static_cast<std::size_t>(n)];
        return out;
    };
    auto displaced = [&](const FockVector& v) {
        FockVector out;
        out.dim = d_;
        out.coeffs.resize(static_cast<std::size_t>(d_));
        kernels::matvec(disp.data(), v.coeffs.data(), out.coeffs.data(),
                        static_cast<std::size_t>(d_), static_cast<std::size_t>(d_));
        return out;
    };
    cplus[0] = vplus_;
    cminus[0] = vminus_;
    cplus[1] = parity_flip(vplus_);
    cminus[1] = parity_flip(vminus_);
    cplus[2] = displaced(vplus_);
    cminus[2] = displaced(vminus_);
    cplus[3] = displaced(cplus[1]);
    cminus[3] = displaced(cminus[1]);

    for (int k = 0; k < 3; ++k) {
        const auto& cc = coeff_[static_cast<std::size_t>(k)];
        FockVector info = vplus_;
        kernels::scale(cc[0] * info_norm_[static_cast<std::size_t>(k)], info.coeffs.data(), info.coeffs.size());
        kernels::axpy(cc[1] * info_norm_[static_cast<std::size_t>(k)], vminus_.coeffs.data(),
                      info.coeffs.data(), info.coeffs.size());
        for (int cv = 0; cv < 4; ++cv) {
            eta_[static_cast<std::size_t>(k)][static_cast<std::size_t>(cv)][0] = dot(info, cplus[static_cast<std::size_t>(cv)]);
            eta_[static_cast<std::size_t>(k)][static_cast<std::size_t>(cv)][1] = dot(info, cminus[static_cast<std::size_t>(cv)]);
        }
    }
    for (int cv = 0; cv < 4; ++cv)
        cross_[static_cast<std::size_t>(cv)] = dot(cplus[static_cast<std::size_t>(cv)], cminus[static_cast<std::size_t>(cv)]);
}

OracleOutcome OracleRun::run(const protocol::DetectionEvent& event) const {
    for (int i = 0; i < 6; ++i) {
        if (event.n[static_cast<std::size_t>(i)] < 0)
            throw std::invalid_argument("negative photon count");
        if (event.n[static_cast<std::size_t>(i)] >= d_)
            throw tail_budget_error("event count exceeds oracle truncation", d_ + 8);
    }
    OracleOutcome out;
    out.probability = 1.0;
    const auto cls = protocol::classify_event(event);
    for (int k = 0; k < 3; ++k) {
        const int n1 = event.n[static_cast<std::size_t>(2 * k)];
        const int n2 = event.n[static_cast<std::size_t>(2 * k + 1)];
        const std::size_t idx = static_cast<std::size_t>(n1) * d_ + n2;
        const auto& cc = coeff_[static_cast<std::size_t>(k)];
        const double nk = info_norm_[static_cast<std::size_t>(k)] * bell_norm_;
        const cplx hp = nk * (cc[0] * block(+1, +1).coeffs[idx] + cc[1] * block(-1, +1).coeffs[idx]);
        const cplx hm = nk * (cc[0] * block(+1, -1).coeffs[idx] + cc[1] * block(-1, -1).coeffs[idx]);
        out.pair_coeffs[static_cast<std::size_t>(k)] = {hp, hm};
        const double q = std::norm(hp) + std::norm(hm) +
                         2.0 * (std::conj(hp) * hm * gram_pm_).real();
        out.probability *= q;

        int cv = 0;  // I
        using protocol::PairPort;
        if (cls.ports[static_cast<std::size_t>(k)] == PairPort::Diff)
            cv = cls.parity[static_cast<std::size_t>(k)] ? 3 : 1;
        else if (cls.ports[static_cast<std::size_t>(k)] == PairPort::Sum)
            cv = cls.parity[static_cast<std::size_t>(k)] ? 2 : 0;
        const auto& eta = eta_[static_cast<std::size_t>(k)][static_cast<std::size_t>(cv)];
        const cplx ov = eta[0] * hp + eta[1] * hm;
        const double nn = std::norm(hp) + std::norm(hm) +
                          2.0 * (std::conj(hp) * hm * cross_[static_cast<std::size_t>(cv)]).real();
        out.leg_fidelity[static_cast<std::size_t>(k)] =
            nn > 1e-28 ? std::norm(ov) / nn : std::numeric_limits<double>::quiet_NaN();
    }
    return out;
}

double OracleRun::enumerated_mass(int cutoff) const {
    double total = 1.0;
    for (int k = 0; k < 3; ++k) {
        const auto& cc = coeff_[static_cast<std::size_t>(k)];
        const double nk = info_norm_[static_cast<std::size_t>(k)] * bell_norm_;
        double pair_sum = 0.0;
        auto add = [&](int n1, int n2) {
            const std::size_t idx = static_cast<std::size_t>(n1) * d_ + n2;
            const cplx hp = nk * (cc[0] * block(+1, +1).coeffs[idx] + cc[1] * block(-1, +1).coeffs[idx]);
            const cplx hm = nk * (cc[0] * block(+1, -1).coeffs[idx] + cc[1] * block(-1, -1).coeffs[idx]);
            pair_sum += std::norm(hp) + std::norm(hm) +
                        2.0 * (std::conj(hp) * hm * gram_pm_).real();
        };
        for (int n = 0; n <= cutoff; ++n) add(n, 0);
        for (int n = 1; n <= cutoff; ++n) add(0, n);
        total *= pair_sum;
    }
    return total;
}

} // namespace ccqt::fock
