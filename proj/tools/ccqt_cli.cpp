// Command-line front end for the cyclic teleportation simulator.
//
// Subcommands:
//   demo       one seeded protocol run with a JSON-lines trace
//   enumerate  full outcome table (CSV or JSON)
//   verify     coherent algebra vs Fock oracle cross-check
//   tables     derived correction table plus diff against the published one
//   sweep      parameter sweep dataset (CSV + summary JSON)

#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>

#include <CLI11.hpp>

#include "ccqt/analysis.hpp"
#include "ccqt/correction_table.hpp"
#include "ccqt/fock.hpp"
#include "ccqt/harness.hpp"
#include "ccqt/kernels.hpp"
#include "ccqt/protocol.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitVerifyFail = 1;
constexpr int kExitUsage = 2;

struct CommonOpts {
    double alpha = 1.0;
    std::vector<double> theta = {M_PI / 4, M_PI / 4, M_PI / 4};
    std::uint64_t seed = 42;
    int cutoff = -1;
    double tail = 1e-9;
    std::string out;
    std::string format = "csv";
};

ccqt::protocol::Params make_params(const CommonOpts& o) {
    ccqt::protocol::Params p;
    p.alpha = o.alpha;
    p.theta = {o.theta[0], o.theta[1], o.theta[2]};
    p.cutoff = o.cutoff;
    p.tail_budget = o.tail;
    p.validate();
    return p;
}

void add_common(CLI::App* cmd, CommonOpts& o) {
    cmd->add_option("--alpha", o.alpha, "coherent field amplitude (> 0)");
    cmd->add_option("--theta", o.theta, "information-state angles theta1 theta2 theta3")
        ->expected(3);
    cmd->add_option("--seed", o.seed, "RNG seed");
    cmd->add_option("--cutoff", o.cutoff, "per-detector photon cutoff override");
    cmd->add_option("--tail", o.tail, "tail probability budget");
    cmd->add_option("--out", o.out, "output path");
    cmd->add_option("--format", o.format, "output format: csv|json")
        ->check(CLI::IsMember({"csv", "json"}));
}

std::ofstream open_out(const std::string& path) {
    std::ofstream f(path);
    if (!f) throw std::runtime_error("cannot open output file: " + path);
    return f;
}

int cmd_demo(const CommonOpts& o) {
    const auto params = make_params(o);
    const auto trace = ccqt::harness::run_protocol(params, o.seed);
    std::printf("run: seed=%llu alpha=%g theta=(%g,%g,%g)\n",
                static_cast<unsigned long long>(o.seed), params.alpha, params.theta[0],
                params.theta[1], params.theta[2]);
    std::printf("event: %s -> case %s%s\n", trace.event.str().c_str(),
                ccqt::protocol::to_string(trace.case_id), trace.failed ? " (failed)" : "");
    static const char* legs[3] = {"A->B", "B->C", "C->A"};
    const auto cls = ccqt::protocol::classify_event(trace.event);
    const bool faithful = cls.heralded_case() &&
                          cls.parity[0] == 0 && cls.parity[1] == 0 && cls.parity[2] == 0;
    for (int leg = 0; leg < 3; ++leg)
        std::printf("%s: F = %.6f%s\n", legs[leg], trace.fidelity[static_cast<std::size_t>(leg)],
                    faithful ? " (faithful)" : "");
    if (!o.out.empty()) {
        auto f = open_out(o.out);
        f << trace.to_jsonl();
        std::printf("trace: %s\n", o.out.c_str());
    }
    return kExitOk;
}

int cmd_enumerate(const CommonOpts& o) {
    const auto params = make_params(o);
    const auto e = ccqt::protocol::enumerate_outcomes(params);
    std::ofstream file;
    std::ostream* os = &std::cout;
    if (!o.out.empty()) {
        file = open_out(o.out);
        os = &file;
    }
    if (o.format == "json")
        ccqt::protocol::write_outcomes_json(e, *os);
    else
        ccqt::protocol::write_outcomes_csv(e, *os);
    std::fprintf(stderr, "events=%zu total_mass=%.12g ambiguous_mass=%.3g cutoff=%d\n",
                 e.rows.size(), e.total_mass, e.ambiguous_mass, e.cutoff);
    return kExitOk;
}

struct VerifyWorst {
    double dev = 0.0;
    ccqt::protocol::DetectionEvent event;
    double alpha = 0.0;
    std::string what;
};

int cmd_verify(const CommonOpts& o, bool alpha_given, double perturb, double tol) {
    std::vector<double> alphas = {0.3, 0.7, 1.0, 1.5, 2.0};
    if (alpha_given) alphas = {o.alpha};
    for (double a : alphas)
        if (a > 2.5) {
            std::fprintf(stderr, "verify: alpha %g exceeds the 2.5 oracle truncation guard\n", a);
            return kExitUsage;
        }

    VerifyWorst worst;
    double fid_worst = 0.0;
    bool perturb_pending = perturb != 0.0;
    for (double alpha : alphas) {
        ccqt::protocol::Params p = make_params(o);
        p.alpha = alpha;
        const auto e = ccqt::protocol::enumerate_outcomes(p);
        const int d = ccqt::fock::default_dim(2.0 * alpha);
        ccqt::fock::OracleRun oracle(alpha, p.theta, d, 1e-12);
        double mass_dev = std::abs(e.total_mass - oracle.enumerated_mass(e.cutoff));
        for (const auto& row : e.rows) {
            auto oc = oracle.run(row.event);
            double prob = row.probability;
            if (perturb_pending && row.probability > 1e-6) {
                prob += perturb;  // fault-injection hook for the test suite
                perturb_pending = false;
            }
            const double pdev = std::abs(prob - oc.probability);
            if (pdev > worst.dev) worst = {pdev, row.event, alpha, "probability"};
            if (row.probability > 1e-18) {
                for (int leg = 0; leg < 3; ++leg) {
                    const double fa = row.fidelity[static_cast<std::size_t>(leg)];
                    const double fo = oc.leg_fidelity[static_cast<std::size_t>(leg)];
                    if (std::isnan(fa) || std::isnan(fo)) continue;
                    const double fdev = std::abs(fa - fo);
                    fid_worst = std::max(fid_worst, fdev);
                    if (fdev > worst.dev) worst = {fdev, row.event, alpha, "fidelity"};
                }
            }
        }
        std::printf("alpha=%.2f: events=%zu mass_dev=%.3g ok\n", alpha, e.rows.size(), mass_dev);
        if (mass_dev > worst.dev) worst = {mass_dev, {}, alpha, "total mass"};
    }
    std::printf("max deviation: %.3g (%s at alpha=%.2f, event %s)\n", worst.dev,
                worst.what.c_str(), worst.alpha, worst.event.str().c_str());
    if (worst.dev > tol) {
        std::fprintf(stderr, "verify FAILED: deviation %.3g exceeds %.1g at event %s\n",
                     worst.dev, tol, worst.event.str().c_str());
        return kExitVerifyFail;
    }
    std::printf("verify OK (tolerance %.1g, kernel isa %s)\n", tol,
                ccqt::kernels::isa_name(ccqt::kernels::active_isa()));
    return kExitOk;
}

int cmd_tables(const CommonOpts& o) {
    const auto derived = ccqt::tables::derive_correction_table();
    const auto diffs = ccqt::tables::diff_tables();
    if (!o.out.empty()) {
        auto f = open_out(o.out);
        ccqt::tables::write_table_csv(derived, f);
        auto fd = open_out(o.out + ".diff");
        ccqt::tables::write_diff_report(diffs, fd);
        std::printf("derived table: %s\ndiff report: %s.diff\n", o.out.c_str(), o.out.c_str());
    } else {
        ccqt::tables::write_table_csv(derived, std::cout);
        ccqt::tables::write_diff_report(diffs, std::cout);
    }
    int faithful = 0;
    for (const auto& cell : derived) faithful += cell.faithful;
    std::fprintf(stderr, "rows=%zu faithful=%d mismatches=%zu\n", derived.size(), faithful,
                 diffs.size());
    return kExitOk;
}

int cmd_sweep(const CommonOpts& o, const std::vector<double>& alphas,
              const std::vector<double>& t1, const std::vector<double>& t2,
              const std::vector<double>& t3) {
    ccqt::analysis::SweepSpec spec;
    spec.alphas = alphas.empty() ? std::vector<double>{0.5, 1.0, 1.5} : alphas;
    spec.theta1 = t1.empty() ? std::vector<double>{o.theta[0]} : t1;
    spec.theta2 = t2.empty() ? std::vector<double>{o.theta[1]} : t2;
    spec.theta3 = t3.empty() ? std::vector<double>{o.theta[2]} : t3;
    const std::string base = o.out.empty() ? "sweep" : o.out;
    auto csv = open_out(base + ".csv");
    auto js = open_out(base + ".json");
    const auto result = ccqt::analysis::run_sweep(spec, csv, js);
    auto audit = open_out(base + ".audit.csv");
    ccqt::analysis::write_closed_form_audit({o.theta[0], o.theta[1], o.theta[2]}, spec.alphas,
                                            audit);
    std::printf("sweep: %zu points -> %s.csv, %s.json, %s.audit.csv\n", result.points.size(),
                base.c_str(), base.c_str(), base.c_str());
    std::printf("average-fidelity spread over grid: A->B %.6g, B->C %.6g, C->A %.6g\n",
                result.avg_spread[0], result.avg_spread[1], result.avg_spread[2]);
    return kExitOk;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"cyclic teleportation of cat coherent states: simulator and analysis"};
    app.require_subcommand(1);

    CommonOpts demo_o, enum_o, verify_o, tables_o, sweep_o;
    auto* demo = app.add_subcommand("demo", "single seeded protocol run");
    add_common(demo, demo_o);
    auto* enumerate = app.add_subcommand("enumerate", "dump the outcome distribution");
    add_common(enumerate, enum_o);
    auto* verify = app.add_subcommand("verify", "cross-check algebra against the Fock oracle");
    add_common(verify, verify_o);
    double perturb = 0.0, verify_tol = 1e-6;
    verify->add_option("--perturb", perturb, "fault-injection offset (testing hook)")
        ->group("");
    verify->add_option("--tolerance", verify_tol, "max allowed deviation");
    auto* tables = app.add_subcommand("tables", "derived correction table and appendix diff");
    add_common(tables, tables_o);
    auto* sweep = app.add_subcommand("sweep", "parameter sweep dataset");
    add_common(sweep, sweep_o);
    std::vector<double> sweep_alphas, sweep_t1, sweep_t2, sweep_t3;
    sweep->add_option("--alphas", sweep_alphas, "alpha grid");
    sweep->add_option("--theta1-grid", sweep_t1, "theta1 grid");
    sweep->add_option("--theta2-grid", sweep_t2, "theta2 grid");
    sweep->add_option("--theta3-grid", sweep_t3, "theta3 grid");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& err) {
        return app.exit(err) ? kExitUsage : kExitOk;
    }

    try {
        if (demo->parsed()) return cmd_demo(demo_o);
        if (enumerate->parsed()) return cmd_enumerate(enum_o);
        if (verify->parsed())
            return cmd_verify(verify_o, verify->count("--alpha") > 0, perturb, verify_tol);
        if (tables->parsed()) return cmd_tables(tables_o);
        if (sweep->parsed()) return cmd_sweep(sweep_o, sweep_alphas, sweep_t1, sweep_t2, sweep_t3);
    } catch (const ccqt::fock::tail_budget_error& err) {
        std::fprintf(stderr, "error: %s (suggested dimension: %d)\n", err.what(),
                     err.suggested_dim);
        return kExitUsage;
    } catch (const std::invalid_argument& err) {
        std::fprintf(stderr, "error: %s\n", err.what());
        return kExitUsage;
    } catch (const std::exception& err) {
        std::fprintf(stderr, "error: %s\n", err.what());
        return kExitVerifyFail;
    }
    return kExitUsage;
}
