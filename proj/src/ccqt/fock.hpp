#pragma once
// Independent verification engine: truncated Fock-space vectors plus a
// two-mode beam-splitter unitary obtained by exponentiating its quadratic
// generator. Nothing in here reuses the coherent algebra's closed-form
// overlaps; agreement between the two routes is what the verify pipeline
// certifies.

#include <array>
#include <complex>
#include <stdexcept>
#include <vector>

#include "ccqt/coherent.hpp"
#include "ccqt/protocol_types.hpp"

namespace ccqt::fock {

using cplx = std::complex<double>;

struct tail_budget_error : std::runtime_error {
    tail_budget_error(const std::string& msg, int suggested)
        : std::runtime_error(msg), suggested_dim(suggested) {}
    int suggested_dim;
};

/// Coefficients over photon numbers 0..dim-1 (single mode) or a row-major
/// (n_first, n_second) block of size dim^2 (two-mode).
struct FockVector {
    int dim = 0;
    std::vector<cplx> coeffs;

    double norm_sq() const;
};

/// Poisson tail mass sum_{n>=d} e^{-mu} mu^n / n! with mu = |beta|^2.
double coherent_tail(double abs_beta_sq, int d);

/// Smallest dimension whose coherent tail stays below the budget.
int suggest_dim(double abs_beta, double tail_budget);

/// Default truncation rule for a worst-case amplitude magnitude.
int default_dim(double beta_max);

/// coeffs[n] = e^{-|beta|^2/2} beta^n / sqrt(n!); throws tail_budget_error
/// if the truncation tail exceeds the budget.
FockVector coherent_to_fock(cplx beta, int d, double tail_budget = 1e-12);

cplx dot(const FockVector& x, const FockVector& y);  // <x|y>

/// Two-mode symmetric beam splitter with phase shifter, truncated to
/// dim^2. Built by exponentiating the anti-Hermitian quadratic generator
/// (pi/4)(a+b - ab+) blockwise over total photon number, then applying the
/// parity phase on the difference port. Exactly unitary on the truncated
/// space by construction.
class BeamSplitterUnitary {
  public:
    explicit BeamSplitterUnitary(int d);

    int dim() const { return d_; }

    /// U v for a two-mode vector (size d^2, row-major (n_i, n_j)).
    FockVector apply(const FockVector& v) const;

    /// max over blocks of ||V^T V - I||_inf for the eigenbases used; a
    /// proxy for ||U+U - I|| on the full truncated space.
    double unitarity_defect() const;

    /// Dense d^2 x d^2 matrix, row-major. Only sensible for small d.
    std::vector<cplx> to_dense() const;

    /// Expectation of total photon number.
    static double total_photons(const FockVector& two_mode);

  private:
    struct Block {
        int ntot;
        int kmin;                   // first row index k in the block
        std::vector<double> evecs;  // m x m, column-major eigenvectors
        std::vector<double> eigs;   // m eigenvalues of the Hermitian form
    };
    int d_;
    std::vector<Block> blocks_;
};

inline BeamSplitterUnitary bs_unitary(int d) { return BeamSplitterUnitary(d); }

/// 1 - |<target|U(input)>|^2 for coherent inputs (a,b) against the
/// sum/difference product state, all in Fock space.
double bs_pair_infidelity(cplx a, cplx b, int d);

/// Dense displacement matrix exp(delta a+ - conj(delta) a), d x d row-major.
std::vector<cplx> displacement_matrix(cplx delta, int d);

/// Result of contracting the global state against one detection event.
struct OracleOutcome {
    double probability = 0.0;
    // Unnormalized coefficients of the heralded factor h(+)|v+> + h(-)|v->
    // per receiving mode 4,5,6.
    std::array<std::array<cplx, 2>, 3> pair_coeffs{};
    // Fidelity of each corrected leg against its information state
    // (A->B on mode 4, B->C on 5, C->A on 6). NaN when the factor norm
    // vanishes.
    std::array<double, 3> leg_fidelity{};
};

/// Fock-space evaluation of the full protocol for one parameter set.
/// The 9-mode global state is kept in sum-of-products form: 64 terms of
/// three transformed two-mode blocks times three single-mode vectors.
class OracleRun {
  public:
    OracleRun(double alpha, const std::array<double, 2>& a,
              const std::array<double, 2>& b, const std::array<double, 2>& c,
              int d, double tail_budget = 1e-12);

    /// Convenience: coefficients from the (theta1,theta2,theta3) angles.
    OracleRun(double alpha, const std::array<double, 3>& thetas, int d,
              double tail_budget = 1e-12);

    OracleOutcome run(const protocol::DetectionEvent& event) const;

    int dim() const { return d_; }
    double alpha() const { return alpha_; }

    /// Total probability mass over the support grid with per-detector
    /// counts below `cutoff`.
    double enumerated_mass(int cutoff) const;

  private:
    void init(const std::array<std::array<double, 2>, 3>& coeff);

    double alpha_;
    int d_;
    double tail_budget_;
    std::array<std::array<double, 2>, 3> coeff_;  // per pair: (c0, c1)
    std::array<double, 3> info_norm_;             // 1/||c0 v+ + c1 v-||
    double bell_norm_;                            // 1/||v+v+ + v-v-||
    FockVector vplus_, vminus_;
    cplx gram_pm_;                     // <v+|v->
    std::array<FockVector, 4> block_;  // U(v_s ⊗ v_t) for (s,t) in {++,+-,-+,--}
    // Corrected-leg tables: variant 0=I,1=P,2=D,3=DP applied to v±,
    // overlapped with the leg's information state.
    std::array<std::array<std::array<cplx, 2>, 4>, 3> eta_;
    std::array<cplx, 4> cross_;  // (C v+)+ (C v-) per variant

    const FockVector& block(int s, int t) const {
        return block_[(s > 0 ? 0 : 2) + (t > 0 ? 0 : 1)];
    }
};

} // namespace ccqt::fock
