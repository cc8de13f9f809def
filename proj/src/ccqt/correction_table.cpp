#include "ccqt/correction_table.hpp"

#include <algorithm>
#include <ostream>
#include <stdexcept>

namespace ccqt::tables {

using protocol::CorrectionOp;
using protocol::PairPort;
using protocol::parity_of_row;
using protocol::plan_correction;
using protocol::ports_of_case;

namespace {

std::string ops_string(const std::vector<CorrectionOp>& ops) {
    bool d = false, p = false;
    for (CorrectionOp op : ops) {
        if (op == CorrectionOp::Displace) d = true;
        if (op == CorrectionOp::Phase) p = true;
    }
    if (d && p) return "DP";
    if (d) return "D";
    if (p) return "P";
    return "I";
}

const std::array<CaseId, 8> kCases = {CaseId::I, CaseId::II, CaseId::III, CaseId::IV,
                                      CaseId::V, CaseId::VI, CaseId::VII, CaseId::VIII};

} // namespace

std::vector<TableCell> derive_correction_table() {
    std::vector<TableCell> cells;
    cells.reserve(64);
    for (CaseId id : kCases) {
        const auto ports = ports_of_case(id);
        for (int row = 1; row <= 8; ++row) {
            const auto parity = parity_of_row(row);
            const auto plan = plan_correction(id, parity);
            TableCell cell;
            cell.id = id;
            cell.row = row;
            cell.faithful = plan.faithful;
            for (int k = 0; k < 3; ++k) {
                cell.sign[static_cast<std::size_t>(k)] = parity[static_cast<std::size_t>(k)] ? -1 : 1;
                cell.base[static_cast<std::size_t>(k)] =
                    ports[static_cast<std::size_t>(k)] == PairPort::Sum ? 1 : -1;
                cell.ops[static_cast<std::size_t>(k)] =
                    ops_string(plan.ops[static_cast<std::size_t>(k)]);
            }
            cells.push_back(std::move(cell));
        }
    }
    return cells;
}

namespace {

// Printed cell content, transcribed from the appendix. Layout per row:
// signs (mode 4,5,6), ops (mode 4,5,6), label anomalies. The published
// tables pair the cases two per table with a shared parity column; here
// every (case, row) gets its own record in derived order.
struct P {
    int s4, s5, s6;
    const char *o4, *o5, *o6;
    const char* labels;
};

const P kPrintedByCase[8][8] = {
    // Case I (Table I, left block)
    {
        {-1, -1, -1, "D", "D", "D", ""},
        {-1, -1, +1, "D", "D", "I", ""},
        {-1, +1, -1, "D", "I", "D", ""},
        {+1, -1, -1, "I", "D", "D", ""},
        {+1, +1, +1, "I", "I", "I", ""},
        {+1, -1, -1, "I", "D", "D", ""},   // printed row repeats the EOO content
        {+1, -1, +1, "I", "D", "I", ""},
        {-1, +1, +1, "D", "I", "I", ""},
    },
    // Case II (Table I, right block)
    {
        {-1, -1, -1, "DP", "DP", "DP", ""},
        {+1, +1, -1, "DP", "DP", "P", ""},  // signs inverted in print
        {+1, -1, +1, "DP", "P", "DP", ""},  // signs inverted in print
        {-1, +1, +1, "P", "DP", "DP", ""},  // signs inverted in print
        {+1, +1, +1, "P", "P", "P", ""},
        {+1, +1, -1, "P", "DP", "DP", ""},
        {+1, -1, +1, "P", "DP", "P", ""},
        {-1, +1, +1, "DP", "P", "P", ""},
    },
    // Case III (Table II, left block)
    {
        {-1, -1, -1, "D", "D", "DP", ""},
        {-1, -1, +1, "D", "D", "P", ""},
        {-1, +1, -1, "D", "I", "DP", ""},
        {+1, -1, -1, "I", "D", "DP", ""},
        {+1, +1, +1, "I", "I", "P", ""},
        {+1, -1, -1, "I", "D", "DP", ""},
        {+1, -1, +1, "I", "D", "P", ""},
        {-1, +1, +1, "D", "I", "P", ""},
    },
    // Case IV (Table II, right block)
    {
        {-1, -1, -1, "D", "DP", "D", ""},
        {-1, -1, +1, "D", "DP", "I", ""},
        {-1, +1, -1, "D", "P", "D", ""},
        {+1, -1, -1, "I", "DP", "D", ""},
        {+1, +1, +1, "I", "P", "I", ""},
        {+1, -1, -1, "I", "DP", "D", ""},
        {+1, -1, +1, "I", "DP", "I", ""},
        {-1, +1, +1, "D", "P", "I", ""},
    },
    // Case V (Table III, left block)
    {
        {-1, -1, -1, "D", "DP", "DP", ""},
        {-1, -1, +1, "D", "DP", "P", ""},
        {-1, +1, -1, "D", "P", "DP", ""},
        {+1, -1, -1, "I", "DP", "DP", ""},
        {+1, +1, +1, "I", "P", "P", ""},
        {+1, -1, -1, "I", "DP", "DP", ""},
        {+1, -1, +1, "I", "DP", "P", ""},
        {-1, +1, +1, "D", "P", "P", ""},
    },
    // Case VI (Table III, right block)
    {
        {-1, -1, -1, "DP", "D", "D", ""},
        {-1, -1, +1, "DP", "D", "I", ""},
        {-1, +1, -1, "DP", "I", "D", ""},
        {+1, -1, -1, "P", "D", "D", ""},
        {+1, +1, +1, "P", "I", "I", ""},
        {+1, -1, -1, "P", "D", "D", ""},
        {+1, -1, +1, "P", "D", "I", ""},
        {-1, +1, +1, "DP", "I", "I", ""},
    },
    // Case VII (Table IV, left block)
    {
        {-1, -1, -1, "DP", "D", "DP", ""},
        {-1, -1, +1, "DP", "D", "P", ""},
        {-1, +1, -1, "DP", "I", "DP", ""},
        {+1, -1, -1, "P", "D", "DP", ""},
        {+1, +1, +1, "P", "I", "P", ""},
        {+1, -1, -1, "P", "D", "DP", ""},
        {+1, -1, +1, "P", "D", "P", ""},
        {-1, +1, +1, "DP", "I", "P", ""},
    },
    // Case VIII (Table IV, right block). The printed b and c factors reuse
    // a-coefficients throughout, and rows 2..4 carry other rows' content.
    {
        {-1, -1, -1, "DP", "DP", "D", "b1=a1;c0=a0;c1=a1"},
        {+1, +1, -1, "P", "P", "D", "b1=a1;c0=a0;c1=a1"},
        {+1, -1, +1, "P", "DP", "I", "b1=a1;c0=a0;c1=a1"},
        {-1, +1, +1, "DP", "P", "I", "b1=a1;c0=a0;c1=a1"},
        {+1, +1, +1, "P", "P", "I", "b1=a1;c0=a0;c1=a1"},
        {+1, +1, -1, "P", "P", "D", "b1=a1;c0=a0;c1=a1"},
        {+1, -1, +1, "P", "DP", "I", "b1=a1;c0=a0;c1=a1"},
        {-1, +1, +1, "DP", "P", "I", "b1=a1;c0=a0;c1=a1"},
    },
};

} // namespace

std::vector<TableCell> paper_table_fixture() {
    std::vector<TableCell> cells = derive_correction_table();
    for (std::size_t c = 0; c < 8; ++c) {
        for (std::size_t r = 0; r < 8; ++r) {
            const P& p = kPrintedByCase[c][r];
            TableCell& cell = cells[c * 8 + r];
            cell.sign = {p.s4, p.s5, p.s6};
            cell.base = {0, 0, 0};  // not transcribed; extraction mangles kets
            cell.ops = {p.o4, p.o5, p.o6};
            cell.label_anomalies = p.labels;
            // printed F tag: exactly the all-even row of each table
            cell.faithful = (cell.row == 5);
        }
    }
    return cells;
}

namespace {

std::string sign_str(const std::array<int, 3>& s) {
    std::string out;
    for (int v : s) out += v > 0 ? '+' : '-';
    return out;
}

std::string ops_str(const std::array<std::string, 3>& o) {
    return o[0] + "," + o[1] + "," + o[2];
}

/// True when (sign, ops) of `printed` equals the derived content of some
/// other parity row within the same case; used to tag copy-paste rows.
int matching_derived_row(const std::vector<TableCell>& derived, const TableCell& printed) {
    for (const TableCell& d : derived) {
        if (d.id != printed.id || d.row == printed.row) continue;
        if (d.sign == printed.sign && d.ops == printed.ops) return d.row;
    }
    return 0;
}

} // namespace

std::vector<TableDiff> diff_tables() {
    const auto derived = derive_correction_table();
    const auto printed = paper_table_fixture();
    std::vector<TableDiff> diffs;
    for (std::size_t i = 0; i < derived.size(); ++i) {
        const TableCell& d = derived[i];
        const TableCell& p = printed[i];
        const int twin = matching_derived_row(derived, p);
        const std::string twin_note =
            twin ? " (printed content matches derived row " + std::to_string(twin) + ")" : "";
        if (d.sign != p.sign)
            diffs.push_back({d.id, d.row, "sign", sign_str(d.sign), sign_str(p.sign),
                             "paper-typo: sign inconsistent with the heralded-state algebra" + twin_note});
        if (d.ops != p.ops)
            diffs.push_back({d.id, d.row, "ops", ops_str(d.ops), ops_str(p.ops),
                             "paper-typo: correction inconsistent with the parity label" + twin_note});
        if (!p.label_anomalies.empty())
            diffs.push_back({d.id, d.row, "labels", "b0,b1,c0,c1", p.label_anomalies,
                             "paper-typo: coefficient labels repeat another party's"});
        if (d.faithful != p.faithful)
            diffs.push_back({d.id, d.row, "faithful", d.faithful ? "F" : "NF",
                             p.faithful ? "F" : "NF", "paper-typo: faithful tag"});
    }
    return diffs;
}

void write_table_csv(const std::vector<TableCell>& cells, std::ostream& os) {
    os << "case,parity_row,parities,sign4,sign5,sign6,base4,base5,base6,op4,op5,op6,faithful\n";
    for (const TableCell& c : cells) {
        const auto parity = parity_of_row(c.row);
        std::string pstr;
        for (int v : parity) pstr += v ? 'O' : 'E';
        os << to_string(c.id) << ',' << c.row << ',' << pstr;
        for (int v : c.sign) os << ',' << (v > 0 ? "+" : "-");
        for (int v : c.base) os << ',' << (v > 0 ? "+a" : (v < 0 ? "-a" : "?"));
        for (const auto& o : c.ops) os << ',' << o;
        os << ',' << (c.faithful ? "F" : "NF") << '\n';
    }
}

void write_diff_report(const std::vector<TableDiff>& diffs, std::ostream& os) {
    os << "# Derived correction table vs published appendix tables\n";
    os << "# Ket base order is not compared (mangled by text extraction).\n";
    os << "case,parity_row,field,derived,printed,classification\n";
    for (const TableDiff& d : diffs)
        os << to_string(d.id) << ',' << d.row << ',' << d.field << ',' << d.derived << ','
           << "\"" << d.printed << "\"" << ',' << "\"" << d.classification << "\"\n";
}

} // namespace ccqt::tables
