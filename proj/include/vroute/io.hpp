#pragma once

// JSON documents for topologies and route plans, plus shared parsing helpers.
// Field order is fixed (ordered_json) so serializations are byte-stable.

#include <cmath>
#include <fstream>
#include <sstream>
#include <string>

#include "json.hpp"
#include "vroute/error.hpp"
#include "vroute/planner.hpp"
#include "vroute/topo.hpp"

namespace vroute::io {

using Json = nlohmann::ordered_json;

inline Json parse_document(const std::string& text, const std::string& what) {
    try {
        return Json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
        int line = 1;
        const std::size_t upto = std::min<std::size_t>(e.byte, text.size());
        for (std::size_t i = 0; i + 1 < upto; ++i) {
            if (text[i] == '\n') ++line;
        }
        throw ParseError(what + ": malformed JSON at line " + std::to_string(line) + ": " + e.what(), {}, line);
    }
}

inline std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ConfigError("cannot open " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

inline void write_file(const std::string& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw ConfigError("cannot write " + path);
    out << text;
}

/// Child `key` of `obj`; throws ParseError naming `prefix.key` when absent.
inline const Json& require(const Json& obj, const std::string& key, const std::string& prefix = {}) {
    const std::string name = prefix.empty() ? key : prefix + "." + key;
    if (!obj.is_object()) throw ParseError("expected an object at '" + (prefix.empty() ? "<root>" : prefix) + "'", prefix);
    const auto it = obj.find(key);
    if (it == obj.end()) throw ParseError("missing required field '" + name + "'", name);
    return *it;
}

template <class T>
T get_as(const Json& obj, const std::string& key, const std::string& prefix = {}) {
    const auto& v = require(obj, key, prefix);
    try {
        return v.get<T>();
    } catch (const nlohmann::json::exception& e) {
        const std::string name = prefix.empty() ? key : prefix + "." + key;
        throw ParseError("field '" + name + "' has the wrong type: " + e.what(), name);
    }
}

template <class T>
T get_or(const Json& obj, const std::string& key, T fallback, const std::string& prefix = {}) {
    if (!obj.is_object() || !obj.contains(key) || obj.at(key).is_null()) return fallback;
    return get_as<T>(obj, key, prefix);
}

/// Powers may be +inf, written as the string "inf".
inline Json power_to_json(double w) { return std::isinf(w) ? Json("inf") : Json(w); }

inline double power_from_json(const Json& obj, const std::string& key, const std::string& prefix = {}) {
    const auto& v = require(obj, key, prefix);
    if (v.is_string() && v.get<std::string>() == "inf") return kInfinitePower;
    return get_as<double>(obj, key, prefix);
}

// ---------------------------------------------------------------------------
// Topology

inline Json to_json(const Topology& t) {
    Json j;
    j["nodes"] = Json::array();
    for (const auto& n : t.nodes) {
        j["nodes"].push_back(Json{{"id", n.id}, {"x", n.pos.x}, {"y", n.pos.y}, {"plane", to_string(n.plane)}});
    }
    j["jammers"] = Json::array();
    for (const auto& m : t.jammers) {
        j["jammers"].push_back(Json{{"id", m.id}, {"x", m.pos.x}, {"y", m.pos.y}, {"power_w", m.power_w}});
    }
    j["road"] = Json{{"a", t.road.a}, {"b", t.road.b}};
    j["road_points"] = Json::array();
    for (const auto& p : t.road_points) j["road_points"].push_back(Json::array({p.x, p.y}));
    j["source_id"] = t.source_id;
    j["dest_id"] = t.dest_id;
    j["seed"] = t.seed;
    return j;
}

inline Topology topology_from_json(const Json& j) {
    Topology t;
    const auto& nodes = require(j, "nodes");
    for (std::size_t i = 0; i < nodes.size(); ++i) {
        const std::string at = "nodes[" + std::to_string(i) + "]";
        const auto& n = nodes[i];
        const auto plane = get_as<std::string>(n, "plane", at);
        if (plane != "A" && plane != "B") throw ParseError("field '" + at + ".plane' must be \"A\" or \"B\"", at + ".plane");
        const auto id = get_as<NodeId>(n, "id", at);
        if (id != static_cast<NodeId>(i)) throw ParseError("node ids must be 0..N-1 in order", at + ".id");
        t.nodes.push_back({id, {get_as<double>(n, "x", at), get_as<double>(n, "y", at)},
                           plane == "A" ? Plane::A : Plane::B});
    }
    const auto& jammers = require(j, "jammers");
    for (std::size_t i = 0; i < jammers.size(); ++i) {
        const std::string at = "jammers[" + std::to_string(i) + "]";
        const auto& m = jammers[i];
        t.jammers.push_back({get_as<JammerId>(m, "id", at), {get_as<double>(m, "x", at), get_as<double>(m, "y", at)},
                             get_as<double>(m, "power_w", at)});
    }
    const auto& road = require(j, "road");
    t.road = {get_as<double>(road, "a", "road"), get_as<double>(road, "b", "road")};
    for (const auto& p : require(j, "road_points")) {
        if (!p.is_array() || p.size() != 2) throw ParseError("road_points entries must be [x, y]", "road_points");
        t.road_points.push_back({p[0].get<double>(), p[1].get<double>()});
    }
    t.source_id = get_as<NodeId>(j, "source_id");
    t.dest_id = get_as<NodeId>(j, "dest_id");
    t.seed = get_as<std::uint64_t>(j, "seed");
    const auto n = static_cast<NodeId>(t.nodes.size());
    if (t.source_id < 0 || t.source_id >= n) throw ParseError("source_id out of range", "source_id");
    if (t.dest_id < 0 || t.dest_id >= n) throw ParseError("dest_id out of range", "dest_id");
    return t;
}

inline std::string dump_topology(const Topology& t) { return to_json(t).dump(2) + "\n"; }

inline Topology parse_topology(const std::string& text) { return topology_from_json(parse_document(text, "topology")); }

inline void save_topology(const std::string& path, const Topology& t) { write_file(path, dump_topology(t)); }

inline Topology load_topology(const std::string& path) { return parse_topology(read_file(path)); }

// ---------------------------------------------------------------------------
// Route plan

inline Json endpoint_to_json(const Endpoint& e, const Topology* topo) {
    if (e.kind == EndpointKind::Node) return Json{{"node", e.index}};
    Json j{{"road_point", e.index}};
    if (topo) {
        const auto& p = topo->road_points.at(static_cast<std::size_t>(e.index));
        j["x"] = p.x;
        j["y"] = p.y;
    }
    return j;
}

inline Endpoint endpoint_from_json(const Json& j, const std::string& at) {
    if (j.is_object() && j.contains("node")) return Endpoint::node(get_as<NodeId>(j, "node", at));
    if (j.is_object() && j.contains("road_point")) {
        return Endpoint{EndpointKind::RoadPoint, get_as<std::int32_t>(j, "road_point", at)};
    }
    throw ParseError("field '" + at + "' must hold \"node\" or \"road_point\"", at);
}

/// `topo` (optional) adds road-point coordinates to hop endpoints.
inline Json to_json(const RoutePlan& p, const Topology* topo = nullptr) {
    Json j;
    j["mode"] = to_string(p.mode);
    j["feasible"] = p.feasible;
    j["total_energy_j"] = p.total_energy;
    j["hop_count"] = p.hop_count;
    j["hop_split"] = p.hop_split ? Json{{"m", p.hop_split->m}, {"n", p.hop_split->n}} : Json(nullptr);
    j["handoff_point"] = p.handoff_point ? Json::array({p.handoff_point->x, p.handoff_point->y}) : Json(nullptr);
    j["per_link_target"] = p.per_link_target;
    j["end_to_end_outage"] = p.end_to_end_outage;
    j["hops"] = Json::array();
    for (const auto& h : p.hops) {
        j["hops"].push_back(Json{{"from", endpoint_to_json(h.from, topo)},
                                 {"to", endpoint_to_json(h.to, topo)},
                                 {"power_w", h.power_w},
                                 {"outage", h.outage},
                                 {"energy_j", h.energy_j},
                                 {"counted", h.counted}});
    }
    return j;
}

inline RoutePlan plan_from_json(const Json& j) {
    RoutePlan p;
    const auto mode = get_as<std::string>(j, "mode");
    if (mode != "vehicle" && mode != "baseline") throw ParseError("field 'mode' must be vehicle|baseline", "mode");
    p.mode = mode == "vehicle" ? PlanMode::Vehicle : PlanMode::Baseline;
    p.feasible = get_as<bool>(j, "feasible");
    p.total_energy = get_as<double>(j, "total_energy_j");
    p.hop_count = get_as<int>(j, "hop_count");
    if (const auto& s = require(j, "hop_split"); !s.is_null()) {
        p.hop_split = HopSplit{get_as<int>(s, "m", "hop_split"), get_as<int>(s, "n", "hop_split")};
    }
    if (const auto& h = require(j, "handoff_point"); !h.is_null()) {
        if (!h.is_array() || h.size() != 2) throw ParseError("handoff_point must be [x, y]", "handoff_point");
        p.handoff_point = Point{h[0].get<double>(), h[1].get<double>()};
    }
    p.per_link_target = get_as<double>(j, "per_link_target");
    p.end_to_end_outage = get_as<double>(j, "end_to_end_outage");
    const auto& hops = require(j, "hops");
    for (std::size_t i = 0; i < hops.size(); ++i) {
        const std::string at = "hops[" + std::to_string(i) + "]";
        const auto& h = hops[i];
        p.hops.push_back(Hop{endpoint_from_json(require(h, "from", at), at + ".from"),
                             endpoint_from_json(require(h, "to", at), at + ".to"), get_as<double>(h, "power_w", at),
                             get_as<double>(h, "outage", at), get_as<double>(h, "energy_j", at),
                             get_as<bool>(h, "counted", at)});
    }
    return p;
}

inline std::string dump_plan(const RoutePlan& p, const Topology* topo = nullptr) { return to_json(p, topo).dump(2) + "\n"; }

inline RoutePlan parse_plan(const std::string& text) { return plan_from_json(parse_document(text, "plan")); }

inline void save_plan(const std::string& path, const RoutePlan& p, const Topology* topo = nullptr) {
    write_file(path, dump_plan(p, topo));
}

inline RoutePlan load_plan(const std::string& path) { return parse_plan(read_file(path)); }

}  // namespace vroute::io
