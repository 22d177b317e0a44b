#pragma once

// Experiment harness: configuration documents, single runs, axis sweeps and
// Monte Carlo validation of the closed-form outage.

#include <algorithm>
#include <atomic>
#include <charconv>
#include <chrono>
#include <filesystem>
#include <optional>
#include <random>
#include <string>
#include <thread>
#include <vector>

#include "vroute/channel.hpp"
#include "vroute/error.hpp"
#include "vroute/io.hpp"
#include "vroute/planner.hpp"
#include "vroute/power.hpp"
#include "vroute/topo.hpp"

namespace vroute {

enum class SweepAxis { T, PMax };

inline const char* to_string(SweepAxis a) { return a == SweepAxis::T ? "T" : "P_max"; }

struct SweepSpec {
    SweepAxis axis = SweepAxis::T;
    std::vector<double> values;

    friend bool operator==(const SweepSpec&, const SweepSpec&) = default;
};

struct ExperimentConfig {
    TopologyConfig topology;
    double jammer_power_w = 0.1;
    /// Saved topology to use instead of generating one per seed.
    std::optional<std::string> topology_file;
    QosParams qos;
    MessageSpec message;
    std::optional<SweepSpec> sweep;
    std::vector<std::uint64_t> seeds;
    PlannerOptions planner;
    std::string output_dir;
    /// When false the CSV runtime column is written as 0 so outputs are
    /// byte-reproducible.
    bool record_runtime = true;

    void validate() const {
        if (!topology_file) vroute::validate(topology);
        qos.validate();
        message.validate();
        if (seeds.empty()) throw ConfigError("at least one seed is required");
        if (!(jammer_power_w >= 0.0)) throw ConfigError("jammer_power_w must be >= 0");
        if (sweep) {
            if (!std::is_sorted(sweep->values.begin(), sweep->values.end())) {
                throw ConfigError("sweep values must be sorted ascending");
            }
            for (double v : sweep->values) {
                if (sweep->axis == SweepAxis::T && !(v > 0.0 && v < 1.0)) throw ConfigError("T values must lie in (0,1)");
                if (sweep->axis == SweepAxis::PMax && !(v > 0.0)) throw ConfigError("P_max values must be > 0");
            }
        }
    }

    friend bool operator==(const ExperimentConfig&, const ExperimentConfig&) = default;
};

// ---------------------------------------------------------------------------
// Config documents

inline io::Json to_json(const ExperimentConfig& c) {
    using io::Json;
    const auto& t = c.topology;
    Json topo;
    topo["area"] = Json{{"width", t.area.width}, {"height", t.area.height}};
    if (t.node_count) topo["node_count"] = *t.node_count;
    else topo["node_intensity"] = t.node_intensity;
    if (t.jammer_count) topo["jammer_count"] = *t.jammer_count;
    else topo["jammer_intensity"] = t.jammer_intensity;
    topo["road"] = Json{{"a", t.road.a}, {"b", t.road.b}};
    topo["road_step"] = t.road_step;
    topo["jammer_power_w"] = c.jammer_power_w;
    if (t.source_id) topo["source_id"] = *t.source_id;
    if (t.dest_id) topo["dest_id"] = *t.dest_id;
    if (c.topology_file) topo["file"] = *c.topology_file;

    Json j;
    j["topology"] = topo;
    j["qos"] = Json{{"rho", c.qos.rho}, {"alpha", c.qos.alpha}, {"T", c.qos.T}, {"p_max", io::power_to_json(c.qos.p_max)}};
    j["message"] = Json{{"bits", c.message.bits}, {"rho", c.message.rho}};
    if (c.sweep) j["sweep"] = Json{{"axis", to_string(c.sweep->axis)}, {"values", c.sweep->values}};
    j["seeds"] = c.seeds;
    j["solver"] = Json{{"tol", c.planner.solver.tol},
                       {"power_floor", c.planner.solver.power_floor},
                       {"model", c.planner.solver.model == OutageModel::Exact ? "exact" : "approximate"}};
    j["planner"] = Json{{"max_hops", c.planner.max_hops ? Json(*c.planner.max_hops) : Json(nullptr)},
                        {"literal_argmax_handoff", c.planner.literal_argmax_handoff}};
    j["output_dir"] = c.output_dir;
    j["record_runtime"] = c.record_runtime;
    return j;
}

/// Parses a config document. Relative topology file paths resolve against
/// `base_dir`.
inline ExperimentConfig config_from_json(const io::Json& j, const std::string& base_dir = {}) {
    using io::get_as;
    using io::get_or;
    using io::require;
    ExperimentConfig c;

    const auto& topo = require(j, "topology");
    auto& t = c.topology;
    if (topo.contains("file")) {
        std::filesystem::path p = get_as<std::string>(topo, "file", "topology");
        if (p.is_relative() && !base_dir.empty()) p = std::filesystem::path(base_dir) / p;
        c.topology_file = p.string();
    }
    if (topo.contains("area")) {
        const auto& area = topo.at("area");
        t.area = {get_as<double>(area, "width", "topology.area"), get_as<double>(area, "height", "topology.area")};
    }
    if (topo.contains("node_count")) t.node_count = get_as<std::int64_t>(topo, "node_count", "topology");
    else if (!c.topology_file) t.node_intensity = get_as<double>(topo, "node_intensity", "topology");
    if (topo.contains("jammer_count")) t.jammer_count = get_as<std::int64_t>(topo, "jammer_count", "topology");
    else if (!c.topology_file) t.jammer_intensity = get_as<double>(topo, "jammer_intensity", "topology");
    if (topo.contains("road")) {
        const auto& road = topo.at("road");
        if (road.contains("general")) {
            const auto g = get_as<std::vector<double>>(road, "general", "topology.road");
            if (g.size() != 3) throw ParseError("topology.road.general must be [A, B, C]", "topology.road.general");
            t.road = RoadLine::from_general(g[0], g[1], g[2]);
        } else {
            t.road = {get_as<double>(road, "a", "topology.road"), get_as<double>(road, "b", "topology.road")};
        }
    } else if (!c.topology_file) {
        require(topo, "road", "topology");
    }
    t.road_step = get_or<double>(topo, "road_step", 1.0, "topology");
    c.jammer_power_w = get_or<double>(topo, "jammer_power_w", 0.1, "topology");
    if (topo.contains("source_id")) t.source_id = get_as<NodeId>(topo, "source_id", "topology");
    if (topo.contains("dest_id")) t.dest_id = get_as<NodeId>(topo, "dest_id", "topology");

    const auto& qos = require(j, "qos");
    c.qos.rho = get_as<double>(qos, "rho", "qos");
    c.qos.gamma = sir_threshold(c.qos.rho);
    c.qos.alpha = get_as<double>(qos, "alpha", "qos");
    c.qos.T = get_as<double>(qos, "T", "qos");
    c.qos.p_max = io::power_from_json(qos, "p_max", "qos");

    if (j.contains("message")) {
        const auto& msg = j.at("message");
        c.message.bits = get_as<double>(msg, "bits", "message");
        c.message.rho = get_or<double>(msg, "rho", c.qos.rho, "message");
    } else {
        c.message = {c.qos.rho, c.qos.rho};  // L / rho = 1 s
    }

    if (j.contains("sweep") && !j.at("sweep").is_null()) {
        const auto& s = j.at("sweep");
        const auto axis = get_as<std::string>(s, "axis", "sweep");
        SweepSpec spec;
        if (axis == "T") spec.axis = SweepAxis::T;
        else if (axis == "P_max") spec.axis = SweepAxis::PMax;
        else throw ParseError("sweep.axis must be \"T\" or \"P_max\"", "sweep.axis");
        spec.values = get_as<std::vector<double>>(s, "values", "sweep");
        c.sweep = std::move(spec);
    }

    c.seeds = get_as<std::vector<std::uint64_t>>(j, "seeds");

    if (j.contains("solver")) {
        const auto& s = j.at("solver");
        c.planner.solver.tol = get_or<double>(s, "tol", 1e-9, "solver");
        c.planner.solver.power_floor = get_or<double>(s, "power_floor", 1e-6, "solver");
        const auto model = get_or<std::string>(s, "model", "exact", "solver");
        if (model == "exact") c.planner.solver.model = OutageModel::Exact;
        else if (model == "approximate") c.planner.solver.model = OutageModel::Approximate;
        else throw ParseError("solver.model must be \"exact\" or \"approximate\"", "solver.model");
    }
    if (j.contains("planner")) {
        const auto& p = j.at("planner");
        if (p.contains("max_hops") && !p.at("max_hops").is_null()) {
            c.planner.max_hops = get_as<int>(p, "max_hops", "planner");
        }
        c.planner.literal_argmax_handoff = get_or<bool>(p, "literal_argmax_handoff", false, "planner");
    }
    c.output_dir = get_or<std::string>(j, "output_dir", "", "");
    c.record_runtime = get_or<bool>(j, "record_runtime", true, "");

    try {
        c.validate();
    } catch (const ConfigError& e) {
        throw ParseError(std::string("invalid configuration: ") + e.what());
    }
    return c;
}

inline ExperimentConfig parse_config(const std::string& text, const std::string& base_dir = {}) {
    return config_from_json(io::parse_document(text, "config"), base_dir);
}

inline ExperimentConfig load_config(const std::string& path) {
    const auto dir = std::filesystem::path(path).parent_path().string();
    return parse_config(io::read_file(path), dir);
}

inline void save_config(const std::string& path, const ExperimentConfig& c) {
    io::write_file(path, to_json(c).dump(2) + "\n");
}

// ---------------------------------------------------------------------------
// Runs

namespace detail {

/// Runs fn(i) for i in [0, n) on a bounded pool of worker threads.
template <class Fn>
void parallel_for(std::size_t n, Fn&& fn, unsigned max_workers = std::thread::hardware_concurrency()) {
    const unsigned workers = std::max(1u, std::min<unsigned>(max_workers == 0 ? 1u : max_workers,
                                                               static_cast<unsigned>(n)));
    if (workers <= 1) {
        for (std::size_t i = 0; i < n; ++i) fn(i);
        return;
    }
    std::atomic<std::size_t> next{0};
    std::exception_ptr error;
    std::atomic<bool> failed{false};
    std::vector<std::jthread> pool;
    pool.reserve(workers);
    for (unsigned w = 0; w < workers; ++w) {
        pool.emplace_back([&] {
            for (std::size_t i = next++; i < n && !failed; i = next++) {
                try {
                    fn(i);
                } catch (...) {
                    if (!failed.exchange(true)) error = std::current_exception();
                }
            }
        });
    }
    pool.clear();
    if (error) std::rethrow_exception(error);
}

inline std::string format_number(double v) {
    char buf[64];
    const auto r = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, r.ptr);
}

}  // namespace detail

/// The topology a run uses for `seed`: loaded from file or freshly drawn.
inline Topology make_topology(const ExperimentConfig& c, std::uint64_t seed) {
    if (c.topology_file) return io::load_topology(*c.topology_file);
    auto tc = c.topology;
    tc.rng_seed = seed;
    return generate_topology(tc, c.jammer_power_w);
}

struct SingleRun {
    Topology topology;
    RoutePlan vehicle;
    RoutePlan baseline;
    AuditReport vehicle_audit;
    AuditReport baseline_audit;
};

/// Plans both modes on the seed's topology and audits them. Writes
/// topology_<seed>.json, plan_vehicle_<seed>.json and plan_baseline_<seed>.json
/// when the config names an output directory.
inline SingleRun run_single(const ExperimentConfig& c, std::uint64_t seed) {
    c.validate();
    SingleRun run;
    run.topology = make_topology(c, seed);
    run.vehicle = plan_with_vehicle(run.topology, c.qos, c.message, c.planner);
    run.baseline = plan_without_vehicle(run.topology, c.qos, c.message, c.planner);
    if (run.vehicle.feasible) run.vehicle_audit = audit_route(run.vehicle, run.topology, c.qos, c.message);
    if (run.baseline.feasible) run.baseline_audit = audit_route(run.baseline, run.topology, c.qos, c.message);

    if (!c.output_dir.empty()) {
        std::filesystem::create_directories(c.output_dir);
        const auto base = std::filesystem::path(c.output_dir);
        const auto tag = std::to_string(seed);
        io::save_topology((base / ("topology_" + tag + ".json")).string(), run.topology);
        io::save_plan((base / ("plan_vehicle_" + tag + ".json")).string(), run.vehicle, &run.topology);
        io::save_plan((base / ("plan_baseline_" + tag + ".json")).string(), run.baseline, &run.topology);
    }
    return run;
}

struct SweepRecord {
    std::uint64_t seed = 0;
    SweepAxis axis = SweepAxis::T;
    double value = 0.0;
    PlanMode mode = PlanMode::Vehicle;
    bool feasible = false;
    std::optional<double> energy_j;  // present iff feasible
    int m = 0;
    std::optional<int> n;
    double runtime_s = 0.0;
};

inline constexpr const char* kSweepCsvHeader = "seed,axis,value,mode,energy_j,m,n,feasible,runtime_s";

inline std::string sweep_csv(const std::vector<SweepRecord>& rows, bool record_runtime = true) {
    std::string out = std::string(kSweepCsvHeader) + "\n";
    for (const auto& r : rows) {
        out += std::to_string(r.seed) + "," + to_string(r.axis) + "," + detail::format_number(r.value) + "," +
               to_string(r.mode) + ",";
        out += r.energy_j ? detail::format_number(*r.energy_j) : "";
        out += ",";
        out += r.feasible ? std::to_string(r.m) : "";
        out += ",";
        out += r.n ? std::to_string(*r.n) : "";
        out += r.feasible ? ",1," : ",0,";
        out += record_runtime ? detail::format_number(r.runtime_s) : "0";
        out += "\n";
    }
    return out;
}

/// Every seed x axis value x mode. The topology is fixed per seed across the
/// grid. Rows are sorted by (seed, value, mode) regardless of completion order.
inline std::vector<SweepRecord> run_sweep(const ExperimentConfig& c, unsigned workers = std::thread::hardware_concurrency()) {
    c.validate();
    if (!c.sweep) throw ConfigError("no sweep axis configured");
    const auto& spec = *c.sweep;

    std::vector<Topology> topologies(c.seeds.size());
    detail::parallel_for(c.seeds.size(), [&](std::size_t i) { topologies[i] = make_topology(c, c.seeds[i]); }, workers);

    const std::size_t per_seed = spec.values.size() * 2;
    std::vector<SweepRecord> rows(c.seeds.size() * per_seed);
    detail::parallel_for(rows.size(), [&](std::size_t cell) {
        const std::size_t s = cell / per_seed;
        const std::size_t v = (cell % per_seed) / 2;
        const PlanMode mode = cell % 2 == 0 ? PlanMode::Vehicle : PlanMode::Baseline;
        QosParams q = c.qos;
        if (spec.axis == SweepAxis::T) q.T = spec.values[v];
        else q.p_max = spec.values[v];

        const auto t0 = std::chrono::steady_clock::now();
        const auto plan = mode == PlanMode::Vehicle ? plan_with_vehicle(topologies[s], q, c.message, c.planner)
                                                    : plan_without_vehicle(topologies[s], q, c.message, c.planner);
        SweepRecord r;
        r.runtime_s = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        r.seed = c.seeds[s];
        r.axis = spec.axis;
        r.value = spec.values[v];
        r.mode = mode;
        r.feasible = plan.feasible;
        if (plan.feasible) {
            r.energy_j = plan.total_energy;
            r.m = plan.hop_count;
            if (plan.hop_split) r.n = plan.hop_split->n;
        }
        rows[cell] = r;
    }, workers);

    std::stable_sort(rows.begin(), rows.end(), [](const SweepRecord& a, const SweepRecord& b) {
        if (a.seed != b.seed) return a.seed < b.seed;
        if (a.value != b.value) return a.value < b.value;
        return std::string_view(to_string(a.mode)) < std::string_view(to_string(b.mode));
    });

    if (!c.output_dir.empty()) {
        std::filesystem::create_directories(c.output_dir);
        io::write_file((std::filesystem::path(c.output_dir) / "sweep.csv").string(), sweep_csv(rows, c.record_runtime));
    }
    return rows;
}

// ---------------------------------------------------------------------------
// Monte Carlo validation

struct McLinkCheck {
    NodeId tx = 0;
    NodeId rx = 0;
    double power_w = 0.0;
    double closed_form = 0.0;
    double monte_carlo = 0.0;
    double abs_deviation = 0.0;
    double clt_bound = 0.0;  // 4 * sqrt(p (1 - p) / samples)
    bool within = false;
};

struct McReport {
    std::uint64_t seed = 0;
    std::uint64_t samples = 0;
    std::vector<McLinkCheck> links;
    double max_abs_deviation = 0.0;
    bool all_within = true;
};

/// Compares the Monte Carlo outage with the closed form on `link_count` random
/// node pairs of the seed's topology. Each link's power is the solved power for
/// a per-link target drawn from [0.01, 0.5], so outages span a useful range.
inline McReport run_mc_validation(const ExperimentConfig& c, std::uint64_t seed, std::uint64_t samples,
                                  std::size_t link_count = 50,
                                  unsigned workers = std::thread::hardware_concurrency()) {
    if (samples < 10'000) throw ConfigError("Monte Carlo validation needs at least 1e4 samples");
    const auto topo = make_topology(c, seed);
    if (topo.nodes.size() < 2) throw ConfigError("topology needs at least two nodes");

    std::mt19937_64 rng(detail::splitmix64(seed ^ 0x6d63u));
    std::uniform_int_distribution<std::size_t> pick(0, topo.nodes.size() - 1);
    std::uniform_real_distribution<double> target_dist(0.01, 0.5);
    QosParams uncapped = c.qos;
    uncapped.p_max = kInfinitePower;

    McReport rep;
    rep.seed = seed;
    rep.samples = samples;
    rep.links.resize(link_count);
    std::vector<LinkGeometry> geometry(link_count);
    for (std::size_t i = 0; i < link_count; ++i) {
        std::size_t u = pick(rng), v = pick(rng);
        while (v == u) v = pick(rng);
        geometry[i] = make_link(topo.nodes[u].pos, topo.nodes[v].pos, topo.jammers);
        const double target = target_dist(rng);
        const auto solved = min_power_for_outage(target, geometry[i], uncapped, c.planner.solver);
        rep.links[i].tx = static_cast<NodeId>(u);
        rep.links[i].rx = static_cast<NodeId>(v);
        rep.links[i].power_w = *solved.power;
    }

    detail::parallel_for(link_count, [&](std::size_t i) {
        auto& l = rep.links[i];
        l.closed_form = link_outage(l.power_w, geometry[i], c.qos);
        l.monte_carlo = mc_link_outage(l.power_w, geometry[i], c.qos, samples, detail::splitmix64(seed + i + 1));
        l.abs_deviation = std::abs(l.monte_carlo - l.closed_form);
        l.clt_bound = 4.0 * std::sqrt(l.closed_form * (1.0 - l.closed_form) / static_cast<double>(samples));
        l.within = l.abs_deviation <= l.clt_bound;
    }, workers);

    for (const auto& l : rep.links) {
        rep.max_abs_deviation = std::max(rep.max_abs_deviation, l.abs_deviation);
        rep.all_within = rep.all_within && l.within;
    }
    return rep;
}

inline io::Json to_json(const McReport& r) {
    io::Json j;
    j["seed"] = r.seed;
    j["samples"] = r.samples;
    j["max_abs_deviation"] = r.max_abs_deviation;
    j["all_within"] = r.all_within;
    j["links"] = io::Json::array();
    for (const auto& l : r.links) {
        j["links"].push_back(io::Json{{"tx", l.tx},
                                      {"rx", l.rx},
                                      {"power_w", l.power_w},
                                      {"closed_form", l.closed_form},
                                      {"monte_carlo", l.monte_carlo},
                                      {"abs_deviation", l.abs_deviation},
                                      {"clt_bound", l.clt_bound},
                                      {"within", l.within}});
    }
    return j;
}

}  // namespace vroute
