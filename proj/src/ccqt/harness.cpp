#include "ccqt/harness.hpp"

#include <random>
#include <stdexcept>

#include <json.hpp>

namespace ccqt::harness {

const char* to_string(Phase phase) {
    switch (phase) {
        case Phase::Prepare: return "Prepare";
        case Phase::Measure: return "Measure";
        case Phase::AwaitCounts: return "AwaitCounts";
        case Phase::Correct: return "Correct";
        case Phase::Done: return "Done";
    }
    return "?";
}

DetectionEvent sample_event(const Enumeration& dist, std::uint64_t seed) {
    if (dist.rows.empty())
        throw std::invalid_argument("cannot sample from an empty distribution");
    std::mt19937_64 rng(seed);
    // uniform in [0,1) built explicitly so the stream is stable across
    // standard libraries
    const double u = double(rng() >> 11) * 0x1.0p-53 * dist.total_mass;
    double acc = 0.0;
    for (const auto& row : dist.rows) {
        acc += row.probability;
        if (u < acc) return row.event;
    }
    return dist.rows.back().event;
}

namespace {

struct Party {
    std::string name;
    Phase phase = Phase::Prepare;
    std::array<int, 2> own_counts{};       // the pair this party measures
    std::array<int, 2> received_counts{};  // from the upstream party
    bool received = false;
    int corrected_mode = 0;  // mode this party corrects after its message arrives
};

nlohmann::json counts_json(const std::array<int, 2>& c) {
    return nlohmann::json::array({c[0], c[1]});
}

} // namespace

RunTrace run_protocol(const Enumeration& dist, std::uint64_t seed) {
    const Params& params = dist.params;
    RunTrace trace;
    trace.seed = seed;
    trace.event = sample_event(dist, seed);
    const auto cls = protocol::classify_event(trace.event);
    trace.case_id = cls.id;

    // Fixed topology: Alice measures (n7,n8) and mails Bob, Bob measures
    // (n9,n10) and mails Charlie, Charlie measures (n11,n12) and mails
    // Alice. Bob corrects mode 4, Charlie mode 5, Alice mode 6.
    std::array<Party, 3> parties = {
        Party{"Alice", Phase::Prepare, {trace.event.n[0], trace.event.n[1]}, {}, false, 6},
        Party{"Bob", Phase::Prepare, {trace.event.n[2], trace.event.n[3]}, {}, false, 4},
        Party{"Charlie", Phase::Prepare, {trace.event.n[4], trace.event.n[5]}, {}, false, 5},
    };
    const int downstream[3] = {1, 2, 0};  // Alice->Bob->Charlie->Alice

    int t = 0;
    auto log = [&](const std::string& actor, const std::string& action,
                   const nlohmann::json& payload) {
        trace.steps.push_back({t, actor, action, payload.dump()});
    };

    log("scheduler", "run_start",
        {{"seed", seed}, {"alpha", params.alpha}, {"theta", params.theta}});

    // Prepare: channel distribution and local mixing happen before any
    // detector fires; the batch pipeline holds the actual state math.
    for (auto& p : parties) {
        log(p.name, "prepare", {{"phase", to_string(p.phase)}});
        p.phase = Phase::Measure;
    }
    ++t;

    for (auto& p : parties) {
        log(p.name, "measure", {{"counts", counts_json(p.own_counts)}});
        p.phase = Phase::AwaitCounts;
    }
    ++t;

    // Message round: one message per party, simultaneously handed to the
    // scheduler, delivered in order.
    int seq = 0;
    for (int k = 0; k < 3; ++k) {
        const Party& src = parties[static_cast<std::size_t>(k)];
        Party& dst = parties[static_cast<std::size_t>(downstream[k])];
        ClassicalMessage msg{src.name, dst.name, src.own_counts, seq++};
        log(src.name, "send_counts",
            {{"to", msg.to}, {"counts", counts_json(msg.counts)}, {"seq", msg.seq}});
        trace.messages.push_back(msg);
    }
    ++t;
    for (const auto& msg : trace.messages) {
        for (auto& p : parties)
            if (p.name == msg.to) {
                p.received_counts = msg.counts;
                p.received = true;
                log(p.name, "receive_counts",
                    {{"from", msg.from}, {"counts", counts_json(msg.counts)}, {"seq", msg.seq}});
            }
    }
    ++t;
    for (const auto& p : parties)
        if (!p.received) throw std::runtime_error("protocol deadlock: message routing failed");

    if (!cls.heralded_case()) {
        // A silent pair leaves its receiver without a steering parity; the
        // run is recorded as failed and nobody corrects anything.
        for (auto& p : parties) {
            p.phase = Phase::Done;
            log(p.name, "abort", {{"reason", to_string(cls.id)}});
        }
        trace.failed = true;
        // Fidelities against the uncorrected residue are still reported.
        const auto outcome = herald(mix_network(prepare_global(params)), trace.event);
        if (!outcome.flagged_zero) {
            protocol::CorrectionPlan noop;
            const auto res = apply_correction(outcome, noop, params);
            trace.fidelity = res.fidelity;
        }
        log("scheduler", "run_end", {{"failed", true}});
        return trace;
    }

    const auto plan = protocol::plan_correction(cls.id, cls.parity);
    const auto outcome = herald(mix_network(prepare_global(params)), trace.event);
    const auto res = apply_correction(outcome, plan, params);
    trace.fidelity = res.fidelity;

    for (auto& p : parties) {
        p.phase = Phase::Correct;
        const int mode_idx = p.corrected_mode - 4;
        std::string ops;
        for (auto op : plan.ops[static_cast<std::size_t>(mode_idx)])
            ops += op == protocol::CorrectionOp::Phase ? "P" : "D";
        if (ops.empty()) ops = "I";
        log(p.name, "correct", {{"mode", p.corrected_mode}, {"ops", ops}});
        p.phase = Phase::Done;
    }
    ++t;
    log("scheduler", "run_end",
        {{"failed", false},
         {"case", to_string(cls.id)},
         {"fidelity", trace.fidelity}});
    return trace;
}

RunTrace run_protocol(const Params& params, std::uint64_t seed) {
    return run_protocol(protocol::enumerate_outcomes(params), seed);
}

std::string RunTrace::to_jsonl() const {
    std::string out;
    for (const auto& step : steps) {
        nlohmann::json j;
        j["t"] = step.t;
        j["actor"] = step.actor;
        j["action"] = step.action;
        j["payload"] = nlohmann::json::parse(step.payload);
        out += j.dump();
        out += '\n';
    }
    return out;
}

} // namespace ccqt::harness
