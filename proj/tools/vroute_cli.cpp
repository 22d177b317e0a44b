// Command-line front end: generate, plan, sweep, oracle, validate-mc.
//
// Exit codes: 0 success, 1 configuration error, 2 infeasible everywhere,
// 3 a validation check (oracle agreement / Monte Carlo bound) failed.

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>

#include "CLI11.hpp"
#include "vroute/expt.hpp"

namespace {

constexpr int kOk = 0;
constexpr int kConfigError = 1;
constexpr int kInfeasible = 2;
constexpr int kCheckFailed = 3;

struct CommonFlags {
    std::string config;
    std::optional<std::uint64_t> seed;
    std::string out;
    bool pmax_infinite = false;
};

void add_common(CLI::App* cmd, CommonFlags& f) {
    cmd->add_option("--config", f.config, "Experiment configuration (JSON)")->required()->check(CLI::ExistingFile);
    cmd->add_option("--seed", f.seed, "Seed (overrides the config's seed list)");
    cmd->add_option("--out", f.out, "Output directory (overrides output_dir)");
    cmd->add_flag("--pmax-infinite", f.pmax_infinite, "Remove the per-node power cap");
}

vroute::ExperimentConfig resolve(const CommonFlags& f) {
    auto c = vroute::load_config(f.config);
    if (f.seed) c.seeds = {*f.seed};
    if (!f.out.empty()) c.output_dir = f.out;
    if (f.pmax_infinite) c.qos.p_max = vroute::kInfinitePower;
    return c;
}

void print_plan(const char* label, const vroute::RoutePlan& p, const vroute::AuditReport& audit) {
    if (!p.feasible) {
        std::printf("  %-8s infeasible\n", label);
        return;
    }
    std::printf("  %-8s energy %.6g J, %d hops", label, p.total_energy, p.hop_count);
    if (p.hop_split) std::printf(" (n=%d in plane A)", p.hop_split->n);
    std::printf(", outage %.6g, audit %s\n", p.end_to_end_outage, audit.passed() ? "pass" : "FAIL");
    for (const auto& f : audit.failures) std::printf("           audit: %s\n", f.c_str());
}

int cmd_generate(const CommonFlags& f) {
    const auto c = resolve(f);
    for (auto seed : c.seeds) {
        const auto topo = vroute::make_topology(c, seed);
        if (c.output_dir.empty()) {
            std::cout << vroute::io::dump_topology(topo);
            continue;
        }
        std::filesystem::create_directories(c.output_dir);
        const auto path = std::filesystem::path(c.output_dir) / ("topology_" + std::to_string(seed) + ".json");
        vroute::io::save_topology(path.string(), topo);
        std::printf("seed %llu: %zu nodes (%zu in plane A), %zu jammers, %zu road points -> %s\n",
                    static_cast<unsigned long long>(seed), topo.nodes.size(), topo.nodes_in(vroute::Plane::A).size(),
                    topo.jammers.size(), topo.road_points.size(), path.string().c_str());
    }
    return kOk;
}

int cmd_plan(const CommonFlags& f) {
    const auto c = resolve(f);
    bool any = false;
    bool audits_ok = true;
    for (auto seed : c.seeds) {
        const auto run = vroute::run_single(c, seed);
        std::printf("seed %llu\n", static_cast<unsigned long long>(seed));
        print_plan("vehicle", run.vehicle, run.vehicle_audit);
        print_plan("baseline", run.baseline, run.baseline_audit);
        if (run.vehicle.feasible && run.baseline.feasible) {
            std::printf("  ratio    %.4f\n", run.vehicle.total_energy / run.baseline.total_energy);
        }
        any = any || run.vehicle.feasible || run.baseline.feasible;
        audits_ok = audits_ok && (!run.vehicle.feasible || run.vehicle_audit.passed()) &&
                    (!run.baseline.feasible || run.baseline_audit.passed());
    }
    if (!any) return kInfeasible;
    return audits_ok ? kOk : kCheckFailed;
}

int cmd_sweep(const CommonFlags& f, bool no_runtime) {
    auto c = resolve(f);
    if (no_runtime) c.record_runtime = false;
    if (f.pmax_infinite && c.sweep && c.sweep->axis == vroute::SweepAxis::PMax) {
        throw vroute::ConfigError("--pmax-infinite conflicts with a P_max sweep");
    }
    const auto rows = vroute::run_sweep(c);
    if (c.output_dir.empty()) {
        std::cout << vroute::sweep_csv(rows, c.record_runtime);
    } else {
        std::printf("%zu rows -> %s\n", rows.size(),
                    (std::filesystem::path(c.output_dir) / "sweep.csv").string().c_str());
    }
    const bool any = std::any_of(rows.begin(), rows.end(), [](const auto& r) { return r.feasible; });
    return any || rows.empty() ? kOk : kInfeasible;
}

int cmd_oracle(const CommonFlags& f, int max_m) {
    const auto c = resolve(f);
    bool agree = true;
    bool any = false;
    for (auto seed : c.seeds) {
        const auto topo = vroute::make_topology(c, seed);
        const int cap = max_m > 0 ? max_m : static_cast<int>(topo.nodes.size()) - 1;
        auto opts = c.planner;
        opts.max_hops = cap;
        std::printf("seed %llu (%zu nodes, max_m %d)\n", static_cast<unsigned long long>(seed), topo.nodes.size(), cap);
        for (bool vehicle : {true, false}) {
            const auto dp = vehicle ? vroute::plan_with_vehicle(topo, c.qos, c.message, opts)
                                    : vroute::plan_without_vehicle(topo, c.qos, c.message, opts);
            const auto bf = vroute::brute_force_plan(topo, c.qos, c.message, cap, vehicle, opts);
            bool same = dp.feasible == bf.feasible;
            if (same && dp.feasible) {
                same = std::abs(dp.total_energy - bf.total_energy) <= 1e-9 * std::abs(bf.total_energy);
            }
            agree = agree && same;
            any = any || dp.feasible;
            auto energy = [](const vroute::RoutePlan& p) {
                char buf[32];
                std::snprintf(buf, sizeof buf, "%.12g", p.total_energy);
                return p.feasible ? std::string(buf) : std::string("infeasible");
            };
            std::printf("  %-8s dp %s  oracle %s  %s\n", vehicle ? "vehicle" : "baseline", energy(dp).c_str(),
                        energy(bf).c_str(), same ? "agree" : "DISAGREE");
        }
    }
    if (!agree) return kCheckFailed;
    return any ? kOk : kInfeasible;
}

int cmd_validate_mc(const CommonFlags& f, std::uint64_t samples, std::size_t links) {
    const auto c = resolve(f);
    bool ok = true;
    for (auto seed : c.seeds) {
        const auto rep = vroute::run_mc_validation(c, seed, samples, links);
        if (!c.output_dir.empty()) {
            std::filesystem::create_directories(c.output_dir);
            vroute::io::write_file(
                (std::filesystem::path(c.output_dir) / ("mc_" + std::to_string(seed) + ".json")).string(),
                vroute::to_json(rep).dump(2) + "\n");
        }
        std::printf("seed %llu: %zu links, %llu samples, max |mc - closed form| = %.3g, %s\n",
                    static_cast<unsigned long long>(seed), rep.links.size(),
                    static_cast<unsigned long long>(rep.samples), rep.max_abs_deviation,
                    rep.all_within ? "all within 4-sigma bound" : "BOUND EXCEEDED");
        ok = ok && rep.all_within;
    }
    return ok ? kOk : kCheckFailed;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Minimum-energy routing with vehicle relaying in jammed ad-hoc networks"};
    app.require_subcommand(1);

    CommonFlags gen_f, plan_f, sweep_f, oracle_f, mc_f;
    auto* gen = app.add_subcommand("generate", "Draw a topology and write it as JSON");
    add_common(gen, gen_f);
    auto* plan = app.add_subcommand("plan", "Plan with and without the vehicle, audit, write plans");
    add_common(plan, plan_f);
    auto* sweep = app.add_subcommand("sweep", "Sweep T or P_max and write sweep.csv");
    add_common(sweep, sweep_f);
    bool no_runtime = false;
    sweep->add_flag("--no-runtime", no_runtime, "Write 0 in the runtime column (byte-reproducible CSV)");
    auto* oracle = app.add_subcommand("oracle", "Compare the dynamic programs with exhaustive search");
    add_common(oracle, oracle_f);
    int max_m = 0;
    oracle->add_option("--max-m", max_m, "Hop-count cap for both searches (default N-1)");
    auto* mc = app.add_subcommand("validate-mc", "Monte Carlo check of the closed-form link outage");
    add_common(mc, mc_f);
    std::uint64_t samples = 1'000'000;
    std::size_t links = 50;
    mc->add_option("--samples", samples, "Fading samples per link")->check(CLI::Range(10'000ULL, 1'000'000'000ULL));
    mc->add_option("--links", links, "Number of random links");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? kOk : kConfigError;
    }

    try {
        if (*gen) return cmd_generate(gen_f);
        if (*plan) return cmd_plan(plan_f);
        if (*sweep) return cmd_sweep(sweep_f, no_runtime);
        if (*oracle) return cmd_oracle(oracle_f, max_m);
        if (*mc) return cmd_validate_mc(mc_f, samples, links);
    } catch (const vroute::ParseError& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return kConfigError;
    } catch (const vroute::ConfigError& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return kConfigError;
    } catch (const vroute::GenerationError& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return kConfigError;
    } catch (const vroute::InstanceTooLargeError& e) {
        std::fprintf(stderr, "error: %s (lower --max-m)\n", e.what());
        return kConfigError;
    } catch (const vroute::DomainError& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return kConfigError;
    }
    return kOk;
}
