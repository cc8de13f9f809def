#include "ccqt/protocol_types.hpp"

namespace ccqt::protocol {

const char* to_string(CaseId id) {
    switch (id) {
        case CaseId::I: return "I";
        case CaseId::II: return "II";
        case CaseId::III: return "III";
        case CaseId::IV: return "IV";
        case CaseId::V: return "V";
        case CaseId::VI: return "VI";
        case CaseId::VII: return "VII";
        case CaseId::VIII: return "VIII";
        case CaseId::Ambiguous: return "Ambiguous";
        case CaseId::Impossible: return "Impossible";
    }
    return "?";
}

Classification classify_event(const DetectionEvent& e) {
    Classification c;
    bool any_both = false, any_silent = false;
    for (int k = 0; k < 3; ++k) {
        const int a = e.n[2 * k], b = e.n[2 * k + 1];
        if (a < 0 || b < 0) throw std::invalid_argument("negative photon count");
        if (a > 0 && b > 0) {
            c.ports[k] = PairPort::Both;
            any_both = true;
        } else if (a == 0 && b == 0) {
            c.ports[k] = PairPort::Silent;
            any_silent = true;
        } else if (a > 0) {
            c.ports[k] = PairPort::Sum;
            c.parity[k] = a % 2;
        } else {
            c.ports[k] = PairPort::Diff;
            c.parity[k] = b % 2;
        }
    }
    if (any_both)
        c.id = CaseId::Impossible;
    else if (any_silent)
        c.id = CaseId::Ambiguous;
    else
        c.id = case_of_ports(c.ports);
    return c;
}

std::array<PairPort, 3> ports_of_case(CaseId id) {
    const PairPort S = PairPort::Sum, D = PairPort::Diff;
    switch (id) {
        case CaseId::I: return {S, S, S};
        case CaseId::II: return {D, D, D};
        case CaseId::III: return {S, S, D};
        case CaseId::IV: return {S, D, S};
        case CaseId::V: return {S, D, D};
        case CaseId::VI: return {D, S, S};
        case CaseId::VII: return {D, S, D};
        case CaseId::VIII: return {D, D, S};
        default:
            throw std::invalid_argument("case has no port pattern");
    }
}

CaseId case_of_ports(const std::array<PairPort, 3>& ports) {
    for (CaseId id : {CaseId::I, CaseId::II, CaseId::III, CaseId::IV,
                      CaseId::V, CaseId::VI, CaseId::VII, CaseId::VIII})
        if (ports_of_case(id) == ports) return id;
    throw std::invalid_argument("port pattern is not one of the eight cases");
}

CorrectionPlan plan_correction(CaseId id, const std::array<int, 3>& parity) {
    if (!(id >= CaseId::I && id <= CaseId::VIII))
        throw std::invalid_argument("correction plans exist only for cases I..VIII");
    const auto ports = ports_of_case(id);
    CorrectionPlan plan;
    plan.faithful = true;
    for (int k = 0; k < 3; ++k) {
        auto& ops = plan.ops[static_cast<std::size_t>(k)];
        if (ports[k] == PairPort::Diff) ops.push_back(CorrectionOp::Phase);
        if (parity[k] != 0) {
            ops.push_back(CorrectionOp::Displace);
            plan.faithful = false;
        }
    }
    return plan;
}

int parity_row(const std::array<int, 3>& parity) {
    static const std::array<std::array<int, 3>, 8> rows = {{
        {1, 1, 1}, {1, 1, 0}, {1, 0, 1}, {0, 1, 1},
        {0, 0, 0}, {0, 0, 1}, {0, 1, 0}, {1, 0, 0},
    }};
    for (int r = 0; r < 8; ++r)
        if (rows[static_cast<std::size_t>(r)] == parity) return r + 1;
    throw std::invalid_argument("parity triple out of range");
}

std::array<int, 3> parity_of_row(int row) {
    static const std::array<std::array<int, 3>, 8> rows = {{
        {1, 1, 1}, {1, 1, 0}, {1, 0, 1}, {0, 1, 1},
        {0, 0, 0}, {0, 0, 1}, {0, 1, 0}, {1, 0, 0},
    }};
    if (row < 1 || row > 8) throw std::invalid_argument("parity row must be 1..8");
    return rows[static_cast<std::size_t>(row - 1)];
}

} // namespace ccqt::protocol
