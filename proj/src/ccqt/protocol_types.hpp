#pragma once
// Event-level vocabulary of the cyclic teleportation protocol: parameter
// set, detection events, the eight heralded cases, and correction plans.
// Kept free of the state algebra so the Fock engine and the table tooling
// can share it.

#include <array>
#include <cmath>
#include <compare>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace ccqt::protocol {

struct Params {
    double alpha = 1.0;
    std::array<double, 3> theta{M_PI / 4, M_PI / 4, M_PI / 4};
    int cutoff = -1;  // <0 selects the default rule
    double tail_budget = 1e-9;

    /// Per-detector cutoff: ceil(2 alpha^2 + 8 alpha + 10) unless overridden.
    int effective_cutoff() const {
        if (cutoff >= 0) return cutoff;
        return static_cast<int>(std::ceil(2 * alpha * alpha + 8 * alpha + 10));
    }

    /// (c0, c1) = (cos theta, sin theta) for pair k (0..2).
    std::array<double, 2> info_coeff(int k) const {
        return {std::cos(theta[static_cast<std::size_t>(k)]),
                std::sin(theta[static_cast<std::size_t>(k)])};
    }

    void validate() const {
        if (!(alpha > 0)) throw std::invalid_argument("alpha must be > 0");
        if (!(tail_budget > 0)) throw std::invalid_argument("tail budget must be > 0");
        for (double t : theta)
            if (!std::isfinite(t)) throw std::invalid_argument("theta must be finite");
    }
};

/// Photon counts (n7,...,n12) at detectors D7..D12.
struct DetectionEvent {
    std::array<int, 6> n{};

    auto operator<=>(const DetectionEvent&) const = default;

    std::string str() const {
        std::string s = "(";
        for (int i = 0; i < 6; ++i) s += std::to_string(n[i]) + (i < 5 ? "," : ")");
        return s;
    }
};

enum class CaseId : std::uint8_t {
    I = 1, II, III, IV, V, VI, VII, VIII,
    Ambiguous,
    Impossible,
};

const char* to_string(CaseId id);

/// Which output port of a detector pair fired.
enum class PairPort : std::uint8_t { Sum, Diff, Silent, Both };

struct Classification {
    CaseId id = CaseId::Ambiguous;
    std::array<PairPort, 3> ports{PairPort::Silent, PairPort::Silent, PairPort::Silent};
    // Parity (0 even / 1 odd) of the firing count per pair; 0 for silent pairs.
    std::array<int, 3> parity{};

    bool heralded_case() const {
        return id >= CaseId::I && id <= CaseId::VIII;
    }
};

/// Pure function of the zero/nonzero pattern and parities.
Classification classify_event(const DetectionEvent& e);

/// Sum/Diff port pattern of a heralded case (throws on non-cases).
std::array<PairPort, 3> ports_of_case(CaseId id);
CaseId case_of_ports(const std::array<PairPort, 3>& ports);

enum class CorrectionOp : std::uint8_t { Phase, Displace };

/// Per receiving mode (4,5,6): ops in application order. Faithful plans
/// never contain a displacement.
struct CorrectionPlan {
    std::array<std::vector<CorrectionOp>, 3> ops;
    bool faithful = false;
};

/// Correction prescription from the heralded case and the parity triple of
/// the firing counts. Phase(pi) undoes a difference-port sign; an odd
/// count adds the displacement recovery after the phase.
CorrectionPlan plan_correction(CaseId id, const std::array<int, 3>& parity);

/// Canonical parity-row order used by the appendix tables:
/// OOO, OOE, OEO, EOO, EEE, EEO, EOE, OEE (1-based rows 1..8).
int parity_row(const std::array<int, 3>& parity);
std::array<int, 3> parity_of_row(int row);

} // namespace ccqt::protocol
