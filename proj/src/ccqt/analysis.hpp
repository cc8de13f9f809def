#pragma once
// Quantitative layer over the enumeration: branch fidelity reports, the
// published closed forms under audit, the fidelity equality chains, the
// average fidelity, and the sweep harness behind the figure claims.

#include <array>
#include <iosfwd>
#include <string>
#include <vector>

#include "ccqt/protocol.hpp"

namespace ccqt::analysis {

using protocol::CaseId;
using protocol::Enumeration;
using protocol::Params;

enum class Leg { AB = 0, BC = 1, CA = 2 };
const char* to_string(Leg leg);

/// How to read the published normalization symbols when evaluating the
/// printed fidelity/probability expressions.
enum class ClosedForm {
    Verbatim,       // every printed polynomial taken at face value
    InverseSquare,  // printed polynomials read as inverse squared norms,
                    // with the corrected cat overlap e^{-2 a^2}
};

/// Printed near-faithful fidelity expression for one leg (odd steering
/// parity), parameterized by that leg's theta.
double closed_form_fidelity(double theta, double alpha, ClosedForm convention);

/// Printed per-branch probability expression (under the same audit).
double closed_form_probability(double theta, double alpha, ClosedForm convention);

struct BranchStat {
    double probability = 0.0;
    double direct_fidelity = 0.0;
    double closed_form = 0.0;  // printed expression for odd branches, 1 for even
    double deviation = 0.0;    // direct - closed_form
};

struct FidelityReport {
    Params params;
    double total_mass = 0.0;
    double ambiguous_mass = 0.0;
    // [case 0..7][parity row 0..7][leg]
    std::array<std::array<std::array<BranchStat, 3>, 8>, 8> branch{};
    double class_probability(CaseId id, int row) const;
};

FidelityReport build_report(const Enumeration& e, ClosedForm convention = ClosedForm::InverseSquare);

struct Chain {
    std::string name;
    Leg leg;
    std::vector<CaseId> cases;
    std::vector<int> rows;
    std::string note;  // non-empty when the printed membership needed fixing
};

/// The published equality chains, with memberships keyed to the derived
/// parity rows (one printed membership is corrected; see the note field).
std::vector<Chain> fidelity_chains();

struct ChainVerdict {
    std::string name;
    bool pass = false;
    double spread = 0.0;  // max - min direct fidelity across the chain
    std::string note;
};

std::vector<ChainVerdict> check_chains(const FidelityReport& report, double tol = 1e-10);

struct AverageFidelity {
    double value = 0.0;
    double conditioned_mass = 0.0;  // mass of cases I..VIII used as the denominator
};

/// Probability-weighted branch fidelity, conditioned on the eight heralded
/// cases (ambiguous mass excluded, as the published sums do).
AverageFidelity average_fidelity(const FidelityReport& report, Leg leg);

struct SweepSpec {
    std::vector<double> alphas;
    std::vector<double> theta1, theta2, theta3;  // crossed into theta points
    bool branch_detail = true;
};

struct SweepPoint {
    double alpha;
    std::array<double, 3> theta;
    std::array<double, 3> average;  // per leg
    double total_mass;
    double ambiguous_mass;
    std::vector<ChainVerdict> chains;
};

struct SweepResult {
    std::vector<SweepPoint> points;
    double avg_spread[3] = {0, 0, 0};  // max-min of averages per leg over the grid
};

/// Deterministic CSV (branch rows plus per-leg AVG summary rows) and a
/// JSON summary. Rerunning the same spec produces byte-identical output.
SweepResult run_sweep(const SweepSpec& spec, std::ostream& csv, std::ostream& summary_json);

/// Closed-form audit across an alpha grid at fixed thetas: direct odd-
/// branch fidelity per leg against both conventions of the printed forms.
void write_closed_form_audit(const std::array<double, 3>& theta,
                             const std::vector<double>& alphas, std::ostream& os);

} // namespace ccqt::analysis
