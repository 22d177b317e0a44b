#pragma once

// Minimum-energy routing under an end-to-end outage budget.
//
// Every hop of an m-hop route gets the same outage share per_link_target(T, m),
// so for a fixed m each link has a fixed minimum power and the route energy is
// additive. Hop-indexed dynamic programs then find the cheapest m-hop walk:
//   - plane A: source -> ... -> u, then u -> vehicle at u's best road point
//   - plane B: from a handoff candidate (vehicle drop-off) -> ... -> destination
//   - baseline: source -> ... -> destination over all nodes, no vehicle
// and the outer loop picks the best (m, n) split.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "vroute/channel.hpp"
#include "vroute/error.hpp"
#include "vroute/power.hpp"
#include "vroute/topo.hpp"

namespace vroute {

struct PlannerOptions {
    SolverOptions solver;
    /// Lower cap on the maximum hop count (default: N - 1).
    std::optional<int> max_hops;
    /// Pick the handoff road point with the LARGEST solved power instead of
    /// the smallest. Off by default; kept for comparison runs only.
    bool literal_argmax_handoff = false;

    friend bool operator==(const PlannerOptions&, const PlannerOptions&) = default;
};

enum class EndpointKind { Node, RoadPoint };

struct Endpoint {
    EndpointKind kind = EndpointKind::Node;
    std::int32_t index = 0;  // node id or road-point index

    static Endpoint node(NodeId id) { return {EndpointKind::Node, id}; }
    static Endpoint road(std::size_t idx) { return {EndpointKind::RoadPoint, static_cast<std::int32_t>(idx)}; }

    friend bool operator==(const Endpoint&, const Endpoint&) = default;
};

struct Hop {
    Endpoint from;
    Endpoint to;
    double power_w = 0.0;
    double outage = 0.0;
    double energy_j = 0.0;
    /// False for the vehicle's own transmission, which is outside both the
    /// energy objective and the outage budget.
    bool counted = true;

    friend bool operator==(const Hop&, const Hop&) = default;
};

struct HopSplit {
    int m = 0;  // total counted hops
    int n = 0;  // plane-A hops, including the node -> vehicle hop

    friend bool operator==(const HopSplit&, const HopSplit&) = default;
};

enum class PlanMode { Vehicle, Baseline };

inline const char* to_string(PlanMode m) { return m == PlanMode::Vehicle ? "vehicle" : "baseline"; }

struct RoutePlan {
    PlanMode mode = PlanMode::Baseline;
    bool feasible = false;
    std::vector<Hop> hops;
    double total_energy = 0.0;
    int hop_count = 0;  // counted hops (m)
    std::optional<HopSplit> hop_split;
    std::optional<Point> handoff_point;
    double per_link_target = 0.0;
    double end_to_end_outage = 0.0;

    friend bool operator==(const RoutePlan&, const RoutePlan&) = default;
};

// ---------------------------------------------------------------------------
// Link powers

/// Solved minimum powers for every ordered node pair at one per-link target.
/// Entries are NaN when the link is infeasible, a self-link, or excluded.
class LinkPowerMatrix {
public:
    LinkPowerMatrix() = default;

    LinkPowerMatrix(const Topology& topo, const std::vector<LinkGeometry>& geometry, const QosParams& q,
                    const SolverOptions& opts, double target, bool same_plane_only)
        : n_(topo.nodes.size()), power_(n_ * n_, std::numeric_limits<double>::quiet_NaN()) {
        for (std::size_t u = 0; u < n_; ++u) {
            for (std::size_t v = 0; v < n_; ++v) {
                if (u == v) continue;
                if (same_plane_only && topo.nodes[u].plane != topo.nodes[v].plane) continue;
                const auto& g = geometry[u * n_ + v];
                if (!(g.tx_rx_distance > 0.0)) continue;
                const auto r = min_power_for_outage(target, g, q, opts);
                if (r.feasible) power_[u * n_ + v] = *r.power;
            }
        }
    }

    std::optional<double> operator()(NodeId u, NodeId v) const {
        const double p = power_[static_cast<std::size_t>(u) * n_ + static_cast<std::size_t>(v)];
        if (std::isnan(p)) return std::nullopt;
        return p;
    }

    std::size_t size() const { return n_; }

private:
    std::size_t n_ = 0;
    std::vector<double> power_;
};

/// All node-pair geometries, row-major by transmitter.
inline std::vector<LinkGeometry> node_link_geometry(const Topology& topo) {
    const std::size_t n = topo.nodes.size();
    std::vector<LinkGeometry> g(n * n);
    for (std::size_t u = 0; u < n; ++u) {
        for (std::size_t v = 0; v < n; ++v) {
            if (u != v) g[u * n + v] = make_link(topo.nodes[u].pos, topo.nodes[v].pos, topo.jammers);
        }
    }
    return g;
}

// ---------------------------------------------------------------------------
// Handoff point

struct HandoffChoice {
    std::size_t road_index = 0;
    Point point;
    double power_w = 0.0;
    double outage = 0.0;
};

namespace detail {

// `links[i]` is the geometry from the transmitter to road_points[i].
inline std::optional<HandoffChoice> select_handoff_from(std::span<const LinkGeometry> links,
                                                        std::span<const Point> road_points, const QosParams& q,
                                                        double target, const PlannerOptions& opts) {
    std::optional<HandoffChoice> best;
    for (std::size_t i = 0; i < road_points.size(); ++i) {
        if (!(links[i].tx_rx_distance > 0.0)) continue;
        const auto r = min_power_for_outage(target, links[i], q, opts.solver);
        if (!r.feasible) continue;
        const bool better = !best || (opts.literal_argmax_handoff ? *r.power > best->power_w
                                                                  : *r.power < best->power_w);
        if (better) best = HandoffChoice{i, road_points[i], *r.power, r.achieved_outage};
    }
    return best;
}

}  // namespace detail

/// Road point at which node position `u` reaches the vehicle with the least
/// power at `target`. Ties keep the earliest point along the road.
inline std::optional<HandoffChoice> select_handoff(const Point& u, std::span<const Point> road_points,
                                                   std::span<const Jammer> jammers, const QosParams& q,
                                                   double target, const PlannerOptions& opts = {}) {
    std::vector<LinkGeometry> links;
    links.reserve(road_points.size());
    for (const auto& r : road_points) links.push_back(make_link(u, r, jammers));
    return detail::select_handoff_from(links, road_points, q, target, opts);
}

// ---------------------------------------------------------------------------
// Hop-indexed dynamic program

/// cost[h][v]: least energy of an h-hop walk from any start to v.
/// pred[h][v]: the node before v on that walk (-1 if none).
struct DpTable {
    std::vector<std::vector<double>> cost;
    std::vector<std::vector<NodeId>> pred;

    int max_hops() const { return static_cast<int>(cost.size()) - 1; }

    /// Walk ending at `v` after `h` hops, start first. Empty if unreachable.
    std::vector<NodeId> path_to(NodeId v, int h) const {
        if (!std::isfinite(cost[static_cast<std::size_t>(h)][static_cast<std::size_t>(v)])) return {};
        std::vector<NodeId> path{v};
        for (int layer = h; layer > 0; --layer) {
            v = pred[static_cast<std::size_t>(layer)][static_cast<std::size_t>(v)];
            path.push_back(v);
        }
        std::reverse(path.begin(), path.end());
        return path;
    }
};

/// Layers 0..max_hops over `members` (ascending ids). Layer 0 is zero at
/// every start. Self-links are never used; ties keep the smaller predecessor.
inline DpTable run_hop_dp(std::size_t node_count, std::span<const NodeId> members, std::span<const NodeId> starts,
                          int max_hops, const LinkPowerMatrix& powers, const MessageSpec& msg) {
    constexpr double inf = std::numeric_limits<double>::infinity();
    DpTable t;
    t.cost.assign(static_cast<std::size_t>(max_hops) + 1, std::vector<double>(node_count, inf));
    t.pred.assign(static_cast<std::size_t>(max_hops) + 1, std::vector<NodeId>(node_count, -1));
    for (NodeId s : starts) t.cost[0][static_cast<std::size_t>(s)] = 0.0;

    for (int h = 1; h <= max_hops; ++h) {
        const auto& prev = t.cost[static_cast<std::size_t>(h - 1)];
        auto& cur = t.cost[static_cast<std::size_t>(h)];
        auto& pred = t.pred[static_cast<std::size_t>(h)];
        for (NodeId v : members) {
            for (NodeId u : members) {
                if (u == v || !std::isfinite(prev[static_cast<std::size_t>(u)])) continue;
                const auto p = powers(u, v);
                if (!p) continue;
                const double c = prev[static_cast<std::size_t>(u)] + link_energy(*p, msg);
                if (c < cur[static_cast<std::size_t>(v)]) {
                    cur[static_cast<std::size_t>(v)] = c;
                    pred[static_cast<std::size_t>(v)] = u;
                }
            }
        }
    }
    return t;
}

// ---------------------------------------------------------------------------
// Plane sub-problems

struct PlaneAResult {
    double cost = 0.0;
    std::vector<NodeId> path;  // source ... u (n nodes, n-1 hops)
    HandoffChoice handoff;      // u -> vehicle
};

struct PlaneBResult {
    double cost = 0.0;
    std::vector<NodeId> path;  // handoff candidate ... destination (k hops)
};

namespace detail {

inline void require_planes(const Topology& topo) {
    if (topo.nodes.size() < 2) throw ConfigError("topology needs at least two nodes");
    if (topo.source_id == topo.dest_id) throw ConfigError("source and destination coincide");
    if (topo.source().plane != Plane::A) throw ConfigError("source must lie in plane A");
    if (topo.dest().plane != Plane::B) throw ConfigError("destination must lie in plane B");
}

inline int hop_cap(const Topology& topo, const PlannerOptions& opts) {
    int cap = static_cast<int>(topo.nodes.size()) - 1;
    if (opts.max_hops) cap = std::min(cap, *opts.max_hops);
    return cap;
}

// Results for n = 1..max_n (index 0 unused) from one DP over plane A.
inline std::vector<std::optional<PlaneAResult>> plane_a_by_hops(const Topology& topo, int max_n,
                                                                const LinkPowerMatrix& powers,
                                                                const std::vector<std::optional<HandoffChoice>>& handoff,
                                                                const MessageSpec& msg) {
    const auto members = topo.nodes_in(Plane::A);
    const std::vector<NodeId> starts{topo.source_id};
    const auto dp = run_hop_dp(topo.nodes.size(), members, starts, std::max(max_n - 1, 0), powers, msg);

    std::vector<std::optional<PlaneAResult>> out(static_cast<std::size_t>(max_n) + 1);
    for (int n = 1; n <= max_n; ++n) {
        const auto& layer = dp.cost[static_cast<std::size_t>(n - 1)];
        std::optional<PlaneAResult> best;
        for (NodeId u : members) {
            const auto& h = handoff[static_cast<std::size_t>(u)];
            if (!std::isfinite(layer[static_cast<std::size_t>(u)]) || !h) continue;
            const double c = layer[static_cast<std::size_t>(u)] + link_energy(h->power_w, msg);
            if (!best || c < best->cost) best = PlaneAResult{c, dp.path_to(u, n - 1), *h};
        }
        out[static_cast<std::size_t>(n)] = std::move(best);
    }
    return out;
}

inline std::vector<std::optional<PlaneBResult>> plane_b_by_hops(const Topology& topo, int max_k,
                                                                std::span<const NodeId> candidates,
                                                                const LinkPowerMatrix& powers,
                                                                const MessageSpec& msg) {
    const auto members = topo.nodes_in(Plane::B);
    const auto dp = run_hop_dp(topo.nodes.size(), members, candidates, max_k, powers, msg);
    std::vector<std::optional<PlaneBResult>> out(static_cast<std::size_t>(max_k) + 1);
    for (int k = 1; k <= max_k; ++k) {
        const double c = dp.cost[static_cast<std::size_t>(k)][static_cast<std::size_t>(topo.dest_id)];
        if (std::isfinite(c)) out[static_cast<std::size_t>(k)] = PlaneBResult{c, dp.path_to(topo.dest_id, k)};
    }
    return out;
}

// Geometry from every plane-A node to every road point (empty rows elsewhere).
inline std::vector<std::vector<LinkGeometry>> road_link_geometry(const Topology& topo) {
    std::vector<std::vector<LinkGeometry>> out(topo.nodes.size());
    for (const auto& n : topo.nodes) {
        if (n.plane != Plane::A) continue;
        auto& row = out[static_cast<std::size_t>(n.id)];
        row.reserve(topo.road_points.size());
        for (const auto& r : topo.road_points) row.push_back(make_link(n.pos, r, topo.jammers));
    }
    return out;
}

inline std::vector<std::optional<HandoffChoice>> handoffs_for_plane_a(
    const Topology& topo, const std::vector<std::vector<LinkGeometry>>& road_links, const QosParams& q, double target,
    const PlannerOptions& opts) {
    std::vector<std::optional<HandoffChoice>> out(topo.nodes.size());
    for (const auto& n : topo.nodes) {
        if (n.plane == Plane::A) {
            out[static_cast<std::size_t>(n.id)] =
                select_handoff_from(road_links[static_cast<std::size_t>(n.id)], topo.road_points, q, target, opts);
        }
    }
    return out;
}

inline Point endpoint_position(const Topology& topo, const Endpoint& e) {
    return e.kind == EndpointKind::Node ? topo.node(e.index).pos
                                        : topo.road_points.at(static_cast<std::size_t>(e.index));
}

inline Hop make_hop(const Topology& topo, Endpoint from, Endpoint to, double target, const QosParams& q,
                    const MessageSpec& msg, const SolverOptions& solver, bool counted) {
    const auto g = make_link(endpoint_position(topo, from), endpoint_position(topo, to), topo.jammers);
    const auto r = min_power_for_outage(target, g, q, solver);
    if (!r.feasible) throw std::logic_error("assembled route contains an infeasible hop");
    return Hop{from, to, *r.power, r.achieved_outage, link_energy(*r.power, msg), counted};
}

inline void finalize(RoutePlan& plan) {
    plan.total_energy = 0.0;
    std::vector<double> outages;
    for (const auto& h : plan.hops) {
        if (!h.counted) continue;
        plan.total_energy += h.energy_j;
        outages.push_back(h.outage);
    }
    plan.hop_count = static_cast<int>(outages.size());
    plan.end_to_end_outage = end_to_end_outage(outages);
    plan.feasible = true;
}

}  // namespace detail

/// Best n-hop route from the source to the vehicle (n-1 node hops in plane A
/// plus the hop onto the road). Returns nullopt when no n-hop route fits
/// under the power cap.
inline std::optional<PlaneAResult> plan_plane_a(const Topology& topo, int n, double target, const QosParams& q,
                                                const MessageSpec& msg, const PlannerOptions& opts = {}) {
    if (n < 1) throw DomainError("plane-A hop count must be >= 1");
    if (topo.nodes_in(Plane::A).empty()) throw ConfigError("plane A has no nodes");
    const auto geometry = node_link_geometry(topo);
    const LinkPowerMatrix powers(topo, geometry, q, opts.solver, target, true);
    const auto handoff = detail::handoffs_for_plane_a(topo, detail::road_link_geometry(topo), q, target, opts);
    return detail::plane_a_by_hops(topo, n, powers, handoff, msg)[static_cast<std::size_t>(n)];
}

/// Best k-hop route in plane B from any handoff candidate to the destination.
/// The vehicle's delivery transmission is not included in the cost.
inline std::optional<PlaneBResult> plan_plane_b(const Topology& topo, int k, double target, const QosParams& q,
                                                const MessageSpec& msg, const PlannerOptions& opts = {}) {
    if (k < 1) throw DomainError("plane-B hop count must be >= 1");
    if (topo.dest().plane != Plane::B) throw ConfigError("destination must lie in plane B");
    const auto candidates = handoff_candidates(topo);
    const auto geometry = node_link_geometry(topo);
    const LinkPowerMatrix powers(topo, geometry, q, opts.solver, target, true);
    return detail::plane_b_by_hops(topo, k, candidates, powers, msg)[static_cast<std::size_t>(k)];
}

namespace detail {

// Turns the node sequences of a vehicle route into hops. The vehicle delivers
// from the first road point whose nearest plane-B node is the drop-off node.
inline RoutePlan assemble_vehicle_plan(const Topology& topo, const std::vector<NodeId>& path_a,
                                       std::size_t handoff_index, const std::vector<NodeId>& path_b, int m,
                                       const QosParams& q, const MessageSpec& msg, const PlannerOptions& opts) {
    const double target = per_link_target(q.T, m);
    RoutePlan plan;
    plan.mode = PlanMode::Vehicle;
    plan.per_link_target = target;
    for (std::size_t i = 0; i + 1 < path_a.size(); ++i) {
        plan.hops.push_back(make_hop(topo, Endpoint::node(path_a[i]), Endpoint::node(path_a[i + 1]), target, q, msg,
                                     opts.solver, true));
    }
    plan.hops.push_back(make_hop(topo, Endpoint::node(path_a.back()), Endpoint::road(handoff_index), target, q, msg,
                                 opts.solver, true));

    const auto targets = road_point_delivery_targets(topo);
    const auto drop = std::find(targets.begin(), targets.end(), path_b.front());
    if (drop == targets.end()) throw std::logic_error("drop-off node is not a handoff candidate");
    QosParams vehicle_q = q;
    vehicle_q.p_max = kInfinitePower;
    plan.hops.push_back(make_hop(topo, Endpoint::road(static_cast<std::size_t>(drop - targets.begin())),
                                 Endpoint::node(path_b.front()), target, vehicle_q, msg, opts.solver, false));

    for (std::size_t i = 0; i + 1 < path_b.size(); ++i) {
        plan.hops.push_back(make_hop(topo, Endpoint::node(path_b[i]), Endpoint::node(path_b[i + 1]), target, q, msg,
                                     opts.solver, true));
    }
    plan.hop_split = HopSplit{m, static_cast<int>(path_a.size())};
    plan.handoff_point = topo.road_points[handoff_index];
    finalize(plan);
    return plan;
}

inline RoutePlan assemble_baseline_plan(const Topology& topo, const std::vector<NodeId>& path, int m,
                                        const QosParams& q, const MessageSpec& msg, const PlannerOptions& opts) {
    const double target = per_link_target(q.T, m);
    RoutePlan plan;
    plan.mode = PlanMode::Baseline;
    plan.per_link_target = target;
    for (std::size_t i = 0; i + 1 < path.size(); ++i) {
        plan.hops.push_back(make_hop(topo, Endpoint::node(path[i]), Endpoint::node(path[i + 1]), target, q, msg,
                                     opts.solver, true));
    }
    finalize(plan);
    return plan;
}

inline RoutePlan infeasible_plan(PlanMode mode) {
    RoutePlan p;
    p.mode = mode;
    p.feasible = false;
    return p;
}

}  // namespace detail

/// Minimum-energy route that hands the message to the vehicle on the road.
/// Searches m = 2..N-1 total hops and n = 1..m-1 plane-A hops.
inline RoutePlan plan_with_vehicle(const Topology& topo, const QosParams& q, const MessageSpec& msg,
                                   const PlannerOptions& opts = {}) {
    detail::require_planes(topo);
    q.validate();
    const auto candidates = handoff_candidates(topo);
    const auto geometry = node_link_geometry(topo);
    const auto road_links = detail::road_link_geometry(topo);
    const int cap = detail::hop_cap(topo, opts);

    struct Best {
        double cost;
        int m;
        PlaneAResult a;
        PlaneBResult b;
    };
    std::optional<Best> best;
    for (int m = 2; m <= cap; ++m) {
        const double target = per_link_target(q.T, m);
        const LinkPowerMatrix powers(topo, geometry, q, opts.solver, target, true);
        const auto handoff = detail::handoffs_for_plane_a(topo, road_links, q, target, opts);
        const auto a = detail::plane_a_by_hops(topo, m - 1, powers, handoff, msg);
        const auto b = detail::plane_b_by_hops(topo, m - 1, candidates, powers, msg);
        for (int n = 1; n <= m - 1; ++n) {
            const auto& ra = a[static_cast<std::size_t>(n)];
            const auto& rb = b[static_cast<std::size_t>(m - n)];
            if (!ra || !rb) continue;
            const double c = ra->cost + rb->cost;
            if (!best || c < best->cost) best = Best{c, m, *ra, *rb};
        }
    }
    if (!best) return detail::infeasible_plan(PlanMode::Vehicle);
    return detail::assemble_vehicle_plan(topo, best->a.path, best->a.handoff.road_index, best->b.path, best->m, q, msg,
                                         opts);
}

/// Minimum-energy route over all nodes without the vehicle, m = 1..N-1 hops.
inline RoutePlan plan_without_vehicle(const Topology& topo, const QosParams& q, const MessageSpec& msg,
                                      const PlannerOptions& opts = {}) {
    detail::require_planes(topo);
    q.validate();
    const auto geometry = node_link_geometry(topo);
    const int cap = detail::hop_cap(topo, opts);
    std::vector<NodeId> members(topo.nodes.size());
    for (std::size_t i = 0; i < members.size(); ++i) members[i] = static_cast<NodeId>(i);
    const std::vector<NodeId> starts{topo.source_id};

    double best_cost = std::numeric_limits<double>::infinity();
    int best_m = 0;
    std::vector<NodeId> best_path;
    for (int m = 1; m <= cap; ++m) {
        const LinkPowerMatrix powers(topo, geometry, q, opts.solver, per_link_target(q.T, m), false);
        const auto dp = run_hop_dp(topo.nodes.size(), members, starts, m, powers, msg);
        const double c = dp.cost[static_cast<std::size_t>(m)][static_cast<std::size_t>(topo.dest_id)];
        if (c < best_cost) {
            best_cost = c;
            best_m = m;
            best_path = dp.path_to(topo.dest_id, m);
        }
    }
    if (best_m == 0) return detail::infeasible_plan(PlanMode::Baseline);
    return detail::assemble_baseline_plan(topo, best_path, best_m, q, msg, opts);
}

// ---------------------------------------------------------------------------
// Exhaustive oracle

struct BruteForceOptions {
    std::uint64_t max_sequences = 20'000'000;
};

namespace detail {

// Memoized link powers keyed by (tx, rx) for a single target; solved on demand.
class LazyLinkPowers {
public:
    LazyLinkPowers(const Topology& topo, const QosParams& q, const SolverOptions& opts, double target)
        : topo_(topo), q_(q), opts_(opts), target_(target), n_(topo.nodes.size()),
          cache_(n_ * n_, std::numeric_limits<double>::signaling_NaN()), known_(n_ * n_, false) {}

    std::optional<double> operator()(NodeId u, NodeId v) {
        if (u == v) return std::nullopt;
        const std::size_t k = static_cast<std::size_t>(u) * n_ + static_cast<std::size_t>(v);
        if (!known_[k]) {
            known_[k] = true;
            const auto g = make_link(topo_.node(u).pos, topo_.node(v).pos, topo_.jammers);
            const auto r = g.tx_rx_distance > 0.0 ? min_power_for_outage(target_, g, q_, opts_) : PowerSolveResult{};
            cache_[k] = r.feasible ? *r.power : std::numeric_limits<double>::quiet_NaN();
        }
        if (std::isnan(cache_[k])) return std::nullopt;
        return cache_[k];
    }

private:
    const Topology& topo_;
    QosParams q_;
    SolverOptions opts_;
    double target_;
    std::size_t n_;
    std::vector<double> cache_;
    std::vector<bool> known_;
};

struct Enumerated {
    double cost = std::numeric_limits<double>::infinity();
    std::vector<NodeId> path;
};

// Cheapest walk of exactly `hops` hops over `pool`, starting anywhere in
// `starts` and ending at `end` (or anywhere when end < 0), scoring the final
// node with `tail` (may return nullopt to reject).
template <class Tail>
Enumerated enumerate_walks(std::span<const NodeId> starts, std::span<const NodeId> pool, int hops, NodeId end,
                           LazyLinkPowers& powers, const MessageSpec& msg, Tail&& tail) {
    Enumerated best;
    std::vector<NodeId> seq;
    auto recurse = [&](auto&& self, double cost) -> void {
        const int done = static_cast<int>(seq.size()) - 1;
        if (done == hops) {
            if (end >= 0 && seq.back() != end) return;
            const auto extra = tail(seq.back());
            if (!extra) return;
            const double total = cost + *extra;
            if (total < best.cost) {
                best.cost = total;
                best.path = seq;
            }
            return;
        }
        for (NodeId v : pool) {
            const auto p = powers(seq.back(), v);
            if (!p) continue;
            seq.push_back(v);
            self(self, cost + link_energy(*p, msg));
            seq.pop_back();
        }
    };
    for (NodeId s : starts) {
        seq.assign(1, s);
        recurse(recurse, 0.0);
    }
    return best;
}

inline double ipow_sat(double base, int exp) {
    double r = 1.0;
    for (int i = 0; i < exp; ++i) r *= base;
    return r;
}

}  // namespace detail

/// Exhaustive search over every hop sequence with the same link rules, outage
/// split and handoff rule as the dynamic programs. Exponential; intended as a
/// test oracle on small instances.
inline RoutePlan brute_force_plan(const Topology& topo, const QosParams& q, const MessageSpec& msg, int max_m,
                                  bool with_vehicle, const PlannerOptions& opts = {},
                                  const BruteForceOptions& bf = {}) {
    detail::require_planes(topo);
    q.validate();
    const double n_nodes = static_cast<double>(topo.nodes.size());
    double estimate = 0.0;
    for (int m = 1; m <= max_m; ++m) estimate += static_cast<double>(m) * detail::ipow_sat(n_nodes, m);
    if (estimate > static_cast<double>(bf.max_sequences)) {
        throw InstanceTooLargeError("brute-force enumeration needs ~" + std::to_string(estimate) + " sequences");
    }

    const auto plane_a = topo.nodes_in(Plane::A);
    const auto plane_b = topo.nodes_in(Plane::B);
    std::vector<NodeId> all(topo.nodes.size());
    for (std::size_t i = 0; i < all.size(); ++i) all[i] = static_cast<NodeId>(i);
    const std::vector<NodeId> source{topo.source_id};
    auto zero_tail = [](NodeId) -> std::optional<double> { return 0.0; };

    if (!with_vehicle) {
        double best_cost = std::numeric_limits<double>::infinity();
        int best_m = 0;
        std::vector<NodeId> best_path;
        for (int m = 1; m <= max_m; ++m) {
            detail::LazyLinkPowers powers(topo, q, opts.solver, per_link_target(q.T, m));
            const auto r = detail::enumerate_walks(source, all, m, topo.dest_id, powers, msg, zero_tail);
            if (r.cost < best_cost) {
                best_cost = r.cost;
                best_m = m;
                best_path = r.path;
            }
        }
        if (best_m == 0) return detail::infeasible_plan(PlanMode::Baseline);
        return detail::assemble_baseline_plan(topo, best_path, best_m, q, msg, opts);
    }

    const auto candidates = handoff_candidates(topo);
    double best_cost = std::numeric_limits<double>::infinity();
    int best_m = 0;
    std::vector<NodeId> best_a, best_b;
    std::size_t best_handoff = 0;
    for (int m = 2; m <= max_m; ++m) {
        const double target = per_link_target(q.T, m);
        detail::LazyLinkPowers powers(topo, q, opts.solver, target);

        // Independent handoff scan: every road point, least power, earliest on ties.
        std::vector<std::optional<std::pair<std::size_t, double>>> handoff(topo.nodes.size());
        for (NodeId u : plane_a) {
            for (std::size_t i = 0; i < topo.road_points.size(); ++i) {
                const auto g = make_link(topo.node(u).pos, topo.road_points[i], topo.jammers);
                const auto r = min_power_for_outage(target, g, q, opts.solver);
                if (!r.feasible) continue;
                auto& h = handoff[static_cast<std::size_t>(u)];
                const bool better = !h || (opts.literal_argmax_handoff ? *r.power > h->second : *r.power < h->second);
                if (better) h = std::pair{i, *r.power};
            }
        }
        auto handoff_tail = [&](NodeId u) -> std::optional<double> {
            const auto& h = handoff[static_cast<std::size_t>(u)];
            if (!h) return std::nullopt;
            return link_energy(h->second, msg);
        };

        for (int n = 1; n <= m - 1; ++n) {
            const auto a = detail::enumerate_walks(source, plane_a, n - 1, -1, powers, msg, handoff_tail);
            if (!std::isfinite(a.cost)) continue;
            const auto b = detail::enumerate_walks(candidates, plane_b, m - n, topo.dest_id, powers, msg, zero_tail);
            if (!std::isfinite(b.cost)) continue;
            const double c = a.cost + b.cost;
            if (c < best_cost) {
                best_cost = c;
                best_m = m;
                best_a = a.path;
                best_b = b.path;
                best_handoff = handoff[static_cast<std::size_t>(a.path.back())]->first;
            }
        }
    }
    if (best_m == 0) return detail::infeasible_plan(PlanMode::Vehicle);
    return detail::assemble_vehicle_plan(topo, best_a, best_handoff, best_b, best_m, q, msg, opts);
}

// ---------------------------------------------------------------------------
// Audit

struct AuditReport {
    bool chain_ok = true;
    bool outage_ok = true;
    bool power_ok = true;
    bool energy_ok = true;
    double recomputed_outage = 0.0;
    double recomputed_energy = 0.0;
    std::vector<std::string> failures;

    bool passed() const { return chain_ok && outage_ok && power_ok && energy_ok; }
};

/// Recomputes every counted hop's outage and energy from geometry and power
/// and checks the route against the outage budget and the power cap.
inline AuditReport audit_route(const RoutePlan& plan, const Topology& topo, const QosParams& q,
                               const MessageSpec& msg) {
    AuditReport rep;
    if (!plan.feasible) {
        rep.chain_ok = false;
        rep.failures.push_back("plan is infeasible");
        return rep;
    }
    if (plan.hops.empty()) {
        rep.chain_ok = false;
        rep.failures.push_back("plan has no hops");
        return rep;
    }

    if (plan.hops.front().from != Endpoint::node(topo.source_id)) {
        rep.chain_ok = false;
        rep.failures.push_back("route does not start at the source");
    }
    if (plan.hops.back().to != Endpoint::node(topo.dest_id)) {
        rep.chain_ok = false;
        rep.failures.push_back("route does not end at the destination");
    }
    for (std::size_t i = 1; i < plan.hops.size(); ++i) {
        const auto& prev = plan.hops[i - 1].to;
        const auto& next = plan.hops[i].from;
        const bool carried = prev.kind == EndpointKind::RoadPoint && next.kind == EndpointKind::RoadPoint;
        if (prev != next && !carried) {
            rep.chain_ok = false;
            rep.failures.push_back("hop " + std::to_string(i) + " does not continue from hop " + std::to_string(i - 1));
        }
    }

    std::vector<double> outages;
    double energy = 0.0;
    for (std::size_t i = 0; i < plan.hops.size(); ++i) {
        const auto& h = plan.hops[i];
        if (!h.counted) continue;
        if (h.power_w > q.p_max) {
            rep.power_ok = false;
            rep.failures.push_back("hop " + std::to_string(i) + " exceeds p_max");
        }
        const auto g = make_link(detail::endpoint_position(topo, h.from), detail::endpoint_position(topo, h.to),
                                 topo.jammers);
        if (!(h.power_w > 0.0) || !(g.tx_rx_distance > 0.0)) {
            rep.outage_ok = false;
            rep.failures.push_back("hop " + std::to_string(i) + " has non-positive power or length");
            outages.push_back(1.0);
            continue;
        }
        outages.push_back(link_outage(h.power_w, g, q));
        energy += link_energy(h.power_w, msg);
    }
    rep.recomputed_outage = end_to_end_outage(outages);
    rep.recomputed_energy = energy;
    if (rep.recomputed_outage > q.T + 1e-9) {
        rep.outage_ok = false;
        rep.failures.push_back("end-to-end outage " + std::to_string(rep.recomputed_outage) + " exceeds T");
    }
    const double scale = std::max({std::abs(energy), std::abs(plan.total_energy), 1e-300});
    if (std::abs(energy - plan.total_energy) > 1e-9 * scale) {
        rep.energy_ok = false;
        rep.failures.push_back("total energy does not match the hop powers");
    }
    return rep;
}

}  // namespace vroute
