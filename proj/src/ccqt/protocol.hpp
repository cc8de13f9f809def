#pragma once
// End-to-end cyclic teleportation pipeline on top of the coherent algebra:
// channel and information-state preparation, the mode-mixing network,
// heralding against detection events, correction planning and the full
// outcome enumeration.

#include <array>
#include <iosfwd>
#include <optional>
#include <vector>

#include "ccqt/coherent.hpp"
#include "ccqt/protocol_types.hpp"

namespace ccqt::protocol {

using coherent::Mode;
using coherent::State;
using coherent::cplx;

/// Bell coherent pair on modes (i, j), built literally by feeding an even
/// cat of amplitude sqrt(2)*alpha and vacuum through the mixing BPS.
State prepare_bell_pair(double alpha, Mode i, Mode j);

/// Three Bell pairs on (1,4), (2,5), (3,6); 8 terms, normalized.
State prepare_channel(double alpha);

/// Cat information states on modes a, b, c with (cos theta_k, sin theta_k).
std::array<State, 3> prepare_info_states(const Params& p);

/// info_a ⊗ info_b ⊗ info_c ⊗ channel on modes a,b,c,1..6 (64 terms).
State prepare_global(const Params& p);

/// The three mixing beam splitters: (a,1)->(7,8), (b,2)->(9,10),
/// (c,3)->(11,12).
State mix_network(const State& global);

struct HeraldedOutcome {
    DetectionEvent event;
    Classification cls;
    double probability = 0.0;
    State raw;                 // unnormalized residue on modes 4,5,6
    bool flagged_zero = false; // squared norm below the zero threshold
};

/// Sequential photon-number projection of the post-mix state.
HeraldedOutcome herald(const State& postmix, const DetectionEvent& event);

/// Per-mode cat factors of a (product) heralded state: coefficients on
/// |+alpha>, |-alpha> for modes 4, 5, 6.
struct FactoredState {
    std::array<std::array<cplx, 2>, 3> g;
    double residual = 0.0;  // max |c - g1 g2 g3| over the coefficient tensor
};

/// Rank-1 factor extraction; throws std::runtime_error when the state does
/// not factorize (which would signal a classification bug).
FactoredState factorize(const State& raw, double alpha);

/// Schmidt singular values of `raw` across the bipartition that separates
/// the given mode from the other two (Gram-metric aware). Used by the
/// factorization invariants.
std::vector<double> schmidt_values(const State& raw, double alpha, int lone_mode);

struct CorrectedOutcome {
    std::array<State, 3> corrected;   // normalized single-mode states on 4,5,6
    std::array<double, 3> fidelity{}; // legs A->B, B->C, C->A
};

/// Applies the plan to the factorized outcome and scores each leg against
/// its information state.
CorrectedOutcome apply_correction(const HeraldedOutcome& outcome,
                                  const CorrectionPlan& plan, const Params& p);

struct OutcomeRow {
    DetectionEvent event;
    CaseId id;
    std::array<int, 3> parity;
    double probability = 0.0;
    std::array<double, 3> fidelity{};
    bool faithful = false;
};

/// One detector pair's heralded data for a given (n_sum, n_diff) outcome.
struct PairOutcome {
    int n1 = 0, n2 = 0;
    PairPort port = PairPort::Silent;
    int parity = 0;
    double q = 0.0;           // probability factor contributed by this pair
    double fidelity = 1.0;    // corrected leg fidelity (NaN if degenerate)
    std::array<cplx, 2> g{};  // heralded coefficients on |+alpha>, |-alpha>
};

struct EnumerateOptions {
    bool keep_rows = true;
    bool with_fidelities = true;
};

struct Enumeration {
    Params params;
    int cutoff = 0;
    std::vector<OutcomeRow> rows;  // lexicographic in (n7..n12); empty if !keep_rows
    std::array<std::vector<PairOutcome>, 3> pair_tables;
    double total_mass = 0.0;
    double ambiguous_mass = 0.0;
    std::array<double, 8> case_mass{};
    double tail_bound = 0.0;  // 1 - product of per-pair enumerated masses
};

/// All events with per-detector counts <= cutoff whose probability is not
/// identically zero (per pair: (n,0), (0,n) or (0,0)).
Enumeration enumerate_outcomes(const Params& p, const EnumerateOptions& opt = {});

/// Mass of one (case, parity-row) class, assembled from the pair tables.
double class_mass(const Enumeration& e, CaseId id, int parity_row);

/// Leg fidelity of a (case, parity-row) class; by parity determinism this
/// is constant across the class's events.
double class_fidelity(const Enumeration& e, CaseId id, int parity_row, int leg);

/// CSV per the outcome-table schema, footer rows carry the mass totals.
void write_outcomes_csv(const Enumeration& e, std::ostream& os);
void write_outcomes_json(const Enumeration& e, std::ostream& os);

} // namespace ccqt::protocol
