#pragma once
// Exact (up to floating point) algebra of finite superpositions of
// multimode coherent states. States are immutable; every operation
// returns a new value. Norms and inner products come from Gram sums over
// the non-orthogonal term basis, never from assumed constants.

#include <complex>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace ccqt::coherent {

using cplx = std::complex<double>;

// Thresholds shared across the algebra.
inline constexpr double kMergeTol = 1e-12;     // amplitude agreement for term merging
inline constexpr double kZeroNormTol = 1e-14;  // squared norm below this is "impossible branch"

struct mode_error : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

struct zero_norm_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Mode label: either one of the letter modes a,b,c or a numeric mode 1..12.
class Mode {
  public:
    static Mode letter(char c) {
        if (c < 'a' || c > 'c') throw mode_error("mode letter out of range");
        return Mode(100 + (c - 'a'));
    }
    static Mode index(int i) {
        if (i < 1 || i > 12) throw mode_error("mode index out of range");
        return Mode(i);
    }

    bool operator==(const Mode&) const = default;
    auto operator<=>(const Mode&) const = default;

    std::string str() const {
        return v_ >= 100 ? std::string(1, char('a' + v_ - 100)) : std::to_string(v_);
    }

  private:
    explicit Mode(int v) : v_(v) {}
    int v_;
};

/// One weighted product of single-mode coherent states. The amplitudes are
/// positionally aligned with the owning state's mode list.
struct Term {
    cplx weight;
    std::vector<cplx> amps;
};

class State {
  public:
    State() = default;
    State(std::vector<Mode> modes, std::vector<Term> terms);

    const std::vector<Mode>& modes() const { return modes_; }
    const std::vector<Term>& terms() const { return terms_; }
    std::size_t mode_count() const { return modes_.size(); }
    std::size_t term_count() const { return terms_.size(); }

    bool has_mode(Mode m) const;
    std::size_t mode_index(Mode m) const;  // throws mode_error if absent

    bool normalized_flag() const { return normalized_; }
    State with_normalized_flag(bool f) const;

    /// Same state with one mode renamed (target must not collide).
    State relabeled(Mode from, Mode to) const;

  private:
    std::vector<Mode> modes_;
    std::vector<Term> terms_;
    bool normalized_ = false;
};

/// |beta> on a single mode, weight w.
State single_mode(Mode m, cplx beta, cplx weight = 1.0);

/// c0|alpha> + c1|-alpha> on a single mode, unnormalized.
State cat_state(Mode m, double alpha, cplx c0, cplx c1);

/// <beta|delta> = exp[-(|beta|^2+|delta|^2-2 conj(beta) delta)/2]
cplx coherent_overlap(cplx beta, cplx delta);

/// <lhs|rhs>; both states must carry the same mode list.
cplx inner_product(const State& lhs, const State& rhs);

double norm_sq(const State& s);

/// Gram matrix of the state's terms, row-major term_count x term_count.
std::vector<cplx> gram_matrix(const State& s);

/// Unit-norm copy; throws zero_norm_error below kZeroNormTol.
State normalized(const State& s);

State tensor(const State& lhs, const State& rhs);

/// Symmetric beam splitter with phase shifter: per term
/// (b_u, b_v) -> b_i = (b_u+b_v)/sqrt2 on i, b_j = (b_u-b_v)/sqrt2 on j.
State apply_bps(const State& s, Mode u, Mode v, Mode i, Mode j);

/// b_mode -> exp(-i theta) b_mode
State phase_shift(const State& s, Mode m, double theta);

/// D(delta): weight *= exp[(delta conj(b) - conj(delta) b)/2], b -> b+delta
State displace(const State& s, Mode m, cplx delta);

/// <n| on one mode: weight *= exp(-|b|^2/2) b^n / sqrt(n!), mode removed.
State project_fock(const State& s, Mode m, int n);

/// Merge near-identical terms and drop terms whose weight cannot matter at
/// tolerance tol (0 keeps everything but still merges duplicates).
State prune(const State& s, double tol);

/// Single-mode Fock kernel <n|beta>.
cplx fock_kernel(int n, cplx beta);

/// JSON round trip: {modes:[...], terms:[{w:[re,im], beta:[[re,im],...]}]}
std::string to_json(const State& s);
State from_json(const std::string& text);

} // namespace ccqt::coherent
