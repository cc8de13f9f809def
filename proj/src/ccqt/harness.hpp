#pragma once
// Three-party choreography simulator: deterministic state machines for
// Alice, Bob and Charlie exchanging photon counts over reliable in-order
// classical channels, with measurement outcomes drawn from the enumerated
// distribution by a seeded generator.

#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include "ccqt/protocol.hpp"

namespace ccqt::harness {

using protocol::DetectionEvent;
using protocol::Enumeration;
using protocol::Params;

enum class Phase { Prepare, Measure, AwaitCounts, Correct, Done };
const char* to_string(Phase phase);

struct ClassicalMessage {
    std::string from;
    std::string to;
    std::array<int, 2> counts{};
    int seq = 0;
};

struct TraceStep {
    int t = 0;  // logical time
    std::string actor;
    std::string action;
    std::string payload;  // JSON object text
};

struct RunTrace {
    std::uint64_t seed = 0;
    DetectionEvent event;
    protocol::CaseId case_id = protocol::CaseId::Ambiguous;
    bool failed = false;  // ambiguous event, no corrections applied
    std::vector<ClassicalMessage> messages;
    std::array<double, 3> fidelity{};  // legs A->B, B->C, C->A
    std::vector<TraceStep> steps;

    /// One JSON object per line: {"t":..,"actor":..,"action":..,"payload":{..}}
    std::string to_jsonl() const;
};

/// Inverse-CDF sample over the lexicographically ordered enumeration.
DetectionEvent sample_event(const Enumeration& dist, std::uint64_t seed);

/// Full protocol run against a pre-built enumeration (cheap per run).
RunTrace run_protocol(const Enumeration& dist, std::uint64_t seed);

/// Convenience overload that enumerates internally.
RunTrace run_protocol(const Params& params, std::uint64_t seed);

} // namespace ccqt::harness
