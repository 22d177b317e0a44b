#pragma once

// Hand-built instances shared by the unit tests.

#include <string>
#include <vector>

#include "vroute/expt.hpp"

namespace vroute::fixtures {

inline std::string source_path(const std::string& rel) { return std::string(VROUTE_SOURCE_DIR) + "/" + rel; }

/// Builds a topology from explicit positions. Node 0 is the source, `dest`
/// the destination; planes come from the road sign at the source.
inline Topology make_topology(const std::vector<Point>& nodes, const std::vector<Point>& jammers, double jammer_power,
                              RoadLine road, NodeId dest, double road_step = 1.0, Area area = {}) {
    Topology t;
    t.road = road;
    const int side = road.evaluate(nodes.at(0)) > 0.0 ? 1 : -1;
    for (std::size_t i = 0; i < nodes.size(); ++i) {
        t.nodes.push_back({static_cast<NodeId>(i), nodes[i], plane_of(nodes[i], road, side)});
    }
    for (std::size_t i = 0; i < jammers.size(); ++i) {
        t.jammers.push_back({static_cast<JammerId>(i), jammers[i], jammer_power});
    }
    t.road_points = discretize_road(road, area, road_step);
    t.source_id = 0;
    t.dest_id = dest;
    return t;
}

/// Horizontal road y = 50.
inline RoadLine horizontal_road(double y = 50.0) { return RoadLine{0.0, -y}; }

inline QosParams unit_qos(double T = 0.1, double p_max = 15.0) { return QosParams{1.0, 1.0, 2.0, T, p_max}; }

/// Single-jammer link with d_uv = d_jv = d.
inline LinkGeometry one_jammer_link(double d = 10.0, double pj = 0.1) { return LinkGeometry{d, {{pj, d}}}; }

inline ExperimentConfig small_config(std::uint64_t seed, int nodes, int jammers) {
    ExperimentConfig c;
    c.topology.node_count = nodes;
    c.topology.jammer_count = jammers;
    c.topology.road = RoadLine::from_general(3, 10, -700);
    c.topology.road_step = 5.0;
    c.jammer_power_w = 0.1;
    c.qos = QosParams::from_rho(0.1, 2.0, 0.1, 15.0);
    c.message = {0.1, 0.1};
    c.seeds = {seed};
    return c;
}

}  // namespace vroute::fixtures
