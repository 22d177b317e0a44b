#pragma once

// Random network topologies: Poisson-placed nodes and jammers in a
// rectangle crossed by a straight road that splits it into two planes.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "vroute/error.hpp"

namespace vroute {

using NodeId = std::int32_t;
using JammerId = std::int32_t;

struct Point {
    double x = 0.0;  // meters
    double y = 0.0;  // meters

    friend bool operator==(const Point&, const Point&) = default;
};

inline double distance(const Point& p, const Point& q) { return std::hypot(p.x - q.x, p.y - q.y); }

/// The road locus a*x + y + b = 0.
struct RoadLine {
    double a = 0.0;
    double b = 0.0;

    /// Normalizes A*x + B*y + C = 0 (B != 0) to the a*x + y + b = 0 form.
    static RoadLine from_general(double A, double B, double C) {
        if (B == 0.0 || !std::isfinite(A / B) || !std::isfinite(C / B)) {
            throw ConfigError("road line must have a non-zero, finite y coefficient");
        }
        return RoadLine{A / B, C / B};
    }

    double evaluate(const Point& p) const { return a * p.x + p.y + b; }

    friend bool operator==(const RoadLine&, const RoadLine&) = default;
};

enum class Plane { A, B };

inline const char* to_string(Plane p) { return p == Plane::A ? "A" : "B"; }

struct Area {
    double width = 100.0;   // meters
    double height = 100.0;  // meters

    friend bool operator==(const Area&, const Area&) = default;
};

struct Node {
    NodeId id = 0;
    Point pos;
    Plane plane = Plane::A;

    friend bool operator==(const Node&, const Node&) = default;
};

struct Jammer {
    JammerId id = 0;
    Point pos;
    double power_w = 0.0;

    friend bool operator==(const Jammer&, const Jammer&) = default;
};

struct TopologyConfig {
    Area area;
    /// Expected node / jammer counts over the whole area (PPP mode).
    double node_intensity = 0.0;
    double jammer_intensity = 0.0;
    /// When set, these override the intensities with a fixed draw size.
    std::optional<std::int64_t> node_count;
    std::optional<std::int64_t> jammer_count;
    RoadLine road;
    double road_step = 1.0;
    std::uint64_t rng_seed = 0;
    std::optional<NodeId> source_id;
    std::optional<NodeId> dest_id;

    friend bool operator==(const TopologyConfig&, const TopologyConfig&) = default;
};

/// Immutable network snapshot. Node ids equal their index in `nodes`.
struct Topology {
    std::vector<Node> nodes;
    std::vector<Jammer> jammers;
    RoadLine road;
    std::vector<Point> road_points;
    NodeId source_id = 0;
    NodeId dest_id = 0;
    std::uint64_t seed = 0;

    const Node& node(NodeId id) const { return nodes.at(static_cast<std::size_t>(id)); }
    const Node& source() const { return node(source_id); }
    const Node& dest() const { return node(dest_id); }

    std::vector<NodeId> nodes_in(Plane plane) const {
        std::vector<NodeId> ids;
        for (const auto& n : nodes) {
            if (n.plane == plane) ids.push_back(n.id);
        }
        return ids;
    }

    friend bool operator==(const Topology&, const Topology&) = default;
};

/// Plane label of `p`: A iff the road equation has the same sign at `p` as
/// at the source.
inline Plane plane_of(const Point& p, const RoadLine& road, int source_side_sign) {
    const double v = road.evaluate(p);
    if (v == 0.0) throw DegeneratePositionError("point lies on the road line");
    const int sign = v > 0.0 ? 1 : -1;
    return sign == source_side_sign ? Plane::A : Plane::B;
}

namespace detail {

struct Segment {
    Point start;
    Point end;
};

// Portion of the road inside [0,W]x[0,H], ordered by increasing x.
inline std::optional<Segment> clip_road(const RoadLine& road, const Area& area) {
    const double W = area.width;
    const double H = area.height;
    auto y_at = [&](double x) { return -road.a * x - road.b; };
    if (road.a == 0.0) {
        const double y = -road.b;
        if (y < 0.0 || y > H) return std::nullopt;
        return Segment{{0.0, y}, {W, y}};
    }
    const double x_at_0 = -road.b / road.a;
    const double x_at_h = (-H - road.b) / road.a;
    const double lo = std::max(0.0, std::min(x_at_0, x_at_h));
    const double hi = std::min(W, std::max(x_at_0, x_at_h));
    if (!(lo <= hi)) return std::nullopt;
    return Segment{{lo, y_at(lo)}, {hi, y_at(hi)}};
}

inline std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9E3779B97F4A7C15ULL;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
    return x ^ (x >> 31);
}

inline NodeId nearest_node(const std::vector<Node>& nodes, const Point& target) {
    NodeId best = -1;
    double best_d = std::numeric_limits<double>::infinity();
    for (const auto& n : nodes) {
        const double d = distance(n.pos, target);
        if (d < best_d) {  // strict: ties keep the smaller id
            best_d = d;
            best = n.id;
        }
    }
    return best;
}

}  // namespace detail

inline bool road_intersects(const RoadLine& road, const Area& area) {
    return detail::clip_road(road, area).has_value();
}

/// Points spaced `step` meters apart along the in-area road segment, from the
/// lower-x boundary intersection to the upper one. Both endpoints included.
inline std::vector<Point> discretize_road(const RoadLine& road, const Area& area, double step) {
    if (!(step > 0.0)) throw ConfigError("road_step must be > 0");
    const auto seg = detail::clip_road(road, area);
    if (!seg) throw ConfigError("road line does not intersect the area");

    const double dx = seg->end.x - seg->start.x;
    const double length = distance(seg->start, seg->end);
    std::vector<Point> points;
    if (length == 0.0) {
        points.push_back(seg->start);
        return points;
    }
    const auto full_steps = static_cast<std::size_t>(std::floor(length / step));
    points.reserve(full_steps + 2);
    for (std::size_t i = 0; i <= full_steps; ++i) {
        const double s = static_cast<double>(i) * step;
        if (s > length) break;
        const double x = seg->start.x + (s / length) * dx;
        points.push_back({x, -road.a * x - road.b});
    }
    if (length - static_cast<double>(full_steps) * step > 1e-9) {
        points.push_back(seg->end);
    } else {
        points.back() = seg->end;
    }
    return points;
}

/// Plane-B nodes that are the nearest plane-B node to at least one road
/// point, sorted by id.
inline std::vector<NodeId> handoff_candidates(const Topology& topo) {
    std::vector<Node> plane_b;
    for (const auto& n : topo.nodes) {
        if (n.plane == Plane::B) plane_b.push_back(n);
    }
    if (plane_b.empty()) throw ConfigError("plane B has no nodes");
    if (topo.road_points.empty()) throw ConfigError("topology has no road points");

    std::vector<NodeId> out;
    for (const auto& r : topo.road_points) out.push_back(detail::nearest_node(plane_b, r));
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
}

/// For every road point, the nearest plane-B node (ties: smaller id).
inline std::vector<NodeId> road_point_delivery_targets(const Topology& topo) {
    std::vector<Node> plane_b;
    for (const auto& n : topo.nodes) {
        if (n.plane == Plane::B) plane_b.push_back(n);
    }
    std::vector<NodeId> out;
    out.reserve(topo.road_points.size());
    for (const auto& r : topo.road_points) out.push_back(detail::nearest_node(plane_b, r));
    return out;
}

inline void validate(const TopologyConfig& config) {
    if (!(config.area.width > 0.0) || !(config.area.height > 0.0)) {
        throw ConfigError("area dimensions must be > 0");
    }
    if (!(config.node_intensity >= 0.0) || !(config.jammer_intensity >= 0.0)) {
        throw ConfigError("intensities must be >= 0");
    }
    if (!(config.road_step > 0.0)) throw ConfigError("road_step must be > 0");
    if (!std::isfinite(config.road.a) || !std::isfinite(config.road.b)) {
        throw ConfigError("road coefficients must be finite");
    }
    if (config.node_count && *config.node_count < 2) {
        throw ConfigError("at least two nodes are required (source and destination coincide)");
    }
    if (config.jammer_count && *config.jammer_count < 0) throw ConfigError("jammer_count must be >= 0");
    if (!road_intersects(config.road, config.area)) {
        throw ConfigError("road line does not intersect the area");
    }
    if (config.node_count) {
        for (auto id : {config.source_id, config.dest_id}) {
            if (id && (*id < 0 || *id >= *config.node_count)) {
                throw ConfigError("explicit source/destination id out of range");
            }
        }
    }
}

/// Draws a topology. Deterministic in `config.rng_seed`; draws that leave a
/// plane empty (or put the destination on the source's side) are rejected
/// and redrawn with the next sub-seed.
inline Topology generate_topology(const TopologyConfig& config, double jammer_power_w) {
    validate(config);
    if (!(jammer_power_w >= 0.0)) throw ConfigError("jammer power must be >= 0");

    constexpr int kMaxAttempts = 1000;
    const Area& area = config.area;
    for (int attempt = 0; attempt < kMaxAttempts; ++attempt) {
        std::mt19937_64 rng(detail::splitmix64(config.rng_seed + static_cast<std::uint64_t>(attempt)));
        std::uniform_real_distribution<double> ux(0.0, area.width);
        std::uniform_real_distribution<double> uy(0.0, area.height);

        auto draw_count = [&](const std::optional<std::int64_t>& fixed, double intensity) -> std::int64_t {
            if (fixed) return *fixed;
            if (intensity == 0.0) return 0;
            return std::poisson_distribution<std::int64_t>(intensity)(rng);
        };

        const std::int64_t n_nodes = draw_count(config.node_count, config.node_intensity);
        std::vector<Node> nodes;
        nodes.reserve(static_cast<std::size_t>(n_nodes));
        for (std::int64_t i = 0; i < n_nodes; ++i) {
            Point p{ux(rng), uy(rng)};
            while (config.road.evaluate(p) == 0.0) p = {ux(rng), uy(rng)};
            nodes.push_back({static_cast<NodeId>(i), p, Plane::A});
        }

        const std::int64_t n_jammers = draw_count(config.jammer_count, config.jammer_intensity);
        std::vector<Jammer> jammers;
        jammers.reserve(static_cast<std::size_t>(n_jammers));
        for (std::int64_t i = 0; i < n_jammers; ++i) {
            jammers.push_back({static_cast<JammerId>(i), {ux(rng), uy(rng)}, jammer_power_w});
        }

        if (nodes.size() < 2) continue;
        const NodeId src = config.source_id.value_or(detail::nearest_node(nodes, {0.0, 0.0}));
        const NodeId dst = config.dest_id.value_or(detail::nearest_node(nodes, {area.width, area.height}));
        if (src == dst || src >= static_cast<NodeId>(nodes.size()) || dst >= static_cast<NodeId>(nodes.size())) {
            continue;
        }

        const int side = config.road.evaluate(nodes[static_cast<std::size_t>(src)].pos) > 0.0 ? 1 : -1;
        for (auto& n : nodes) n.plane = plane_of(n.pos, config.road, side);
        if (nodes[static_cast<std::size_t>(dst)].plane != Plane::B) continue;

        Topology topo;
        topo.nodes = std::move(nodes);
        topo.jammers = std::move(jammers);
        topo.road = config.road;
        topo.road_points = discretize_road(config.road, area, config.road_step);
        topo.source_id = src;
        topo.dest_id = dst;
        topo.seed = config.rng_seed;
        return topo;
    }
    throw GenerationError("no valid topology after " + std::to_string(kMaxAttempts) + " draws");
}

}  // namespace vroute
