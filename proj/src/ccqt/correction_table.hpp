#pragma once
// The 64-row correction table (8 cases x 8 parity rows): one version
// derived programmatically from the heralded-state sign algebra, and one
// hand-encoded from the published appendix tables. The diff between them
// documents the published tables' inconsistencies instead of silently
// trusting either.

#include <array>
#include <iosfwd>
#include <string>
#include <vector>

#include "ccqt/protocol_types.hpp"

namespace ccqt::tables {

using protocol::CaseId;

/// One (case, parity-row) cell. `sign[k]` is the sign of the x1
/// coefficient in the heralded factor of receiving mode 4+k; `base[k]` is
/// +1 when the factor reads (x0|+a> , x1|-a>) and -1 for the reversed
/// order; `ops[k]` is the correction as a set drawn from {I, P, D, DP}.
struct TableCell {
    CaseId id = CaseId::I;
    int row = 1;  // parity row 1..8 (OOO, OOE, OEO, EOO, EEE, EEO, EOE, OEE)
    std::array<int, 3> sign{1, 1, 1};
    std::array<int, 3> base{1, 1, 1};
    std::array<std::string, 3> ops{"I", "I", "I"};
    bool faithful = false;
    // coefficient-label anomalies as printed, e.g. "b1=a1;c0=a0;c1=a1";
    // empty when the labels are the expected ones
    std::string label_anomalies;
};

/// All 64 cells computed from the heralded sign algebra, ordered case
/// I..VIII major, parity row 1..8 minor.
std::vector<TableCell> derive_correction_table();

/// The appendix tables as printed (same ordering). Sign, ops, faithful
/// tag and label anomalies are transcribed verbatim; the ket base order is
/// not encoded because the source extraction mangles it.
std::vector<TableCell> paper_table_fixture();

struct TableDiff {
    CaseId id;
    int row;
    std::string field;       // "sign", "ops", "labels", "faithful"
    std::string derived;
    std::string printed;
    std::string classification;
};

/// Field-by-field comparison of derived vs printed (base order excluded).
std::vector<TableDiff> diff_tables();

void write_table_csv(const std::vector<TableCell>& cells, std::ostream& os);
void write_diff_report(const std::vector<TableDiff>& diffs, std::ostream& os);

} // namespace ccqt::tables
