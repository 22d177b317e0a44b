#include <gtest/gtest.h>

#include <filesystem>

#include "support.hpp"
#include "vroute/expt.hpp"
#include "vroute/io.hpp"

using namespace vroute;
namespace fx = vroute::fixtures;

namespace {

std::filesystem::path scratch(const std::string& name) {
    const auto dir = std::filesystem::temp_directory_path() / "vroute_test_io";
    std::filesystem::create_directories(dir);
    return dir / name;
}

Topology sample_topology() {
    auto c = fx::small_config(11, 6, 3);
    c.topology.rng_seed = 11;
    return generate_topology(c.topology, c.jammer_power_w);
}

}  // namespace

TEST(TopologyDocument, RoundTrip) {
    const auto t = sample_topology();
    const auto path = scratch("topo.json").string();
    io::save_topology(path, t);
    const auto back = io::load_topology(path);
    EXPECT_EQ(back, t);
    EXPECT_EQ(io::dump_topology(back), io::dump_topology(t));
}

TEST(TopologyDocument, MissingFieldIsNamed) {
    auto j = io::to_json(sample_topology());
    j["nodes"][2].erase("x");
    try {
        io::topology_from_json(j);
        FAIL() << "expected ParseError";
    } catch (const ParseError& e) {
        EXPECT_EQ(e.field(), "nodes[2].x");
    }
}

TEST(TopologyDocument, BadPlaneLabel) {
    auto j = io::to_json(sample_topology());
    j["nodes"][0]["plane"] = "C";
    EXPECT_THROW(io::topology_from_json(j), ParseError);
}

TEST(TopologyDocument, MalformedJsonReportsLine) {
    try {
        io::parse_topology("{\n  \"nodes\": [\n    {\"id\": 0,,}\n  ]\n}\n");
        FAIL() << "expected ParseError";
    } catch (const ParseError& e) {
        EXPECT_EQ(e.line(), 3);
        EXPECT_NE(std::string(e.what()).find("line 3"), std::string::npos);
    }
}

TEST(PlanDocument, RoundTrip) {
    const auto t = sample_topology();
    const auto c = fx::small_config(11, 6, 3);
    for (const auto& plan : {plan_with_vehicle(t, c.qos, c.message), plan_without_vehicle(t, c.qos, c.message)}) {
        const auto text = io::dump_plan(plan, &t);
        const auto back = io::parse_plan(text);
        EXPECT_EQ(back, plan);
        EXPECT_EQ(io::dump_plan(back, &t), text);
    }
}

TEST(PlanDocument, InfeasiblePlanRoundTrip) {
    RoutePlan p;
    p.mode = PlanMode::Vehicle;
    EXPECT_EQ(io::parse_plan(io::dump_plan(p)), p);
}

TEST(PlanDocument, MissingFieldIsNamed) {
    auto j = io::to_json(plan_without_vehicle(sample_topology(), fx::small_config(11, 6, 3).qos, MessageSpec{}));
    j.erase("hop_count");
    try {
        io::plan_from_json(j);
        FAIL() << "expected ParseError";
    } catch (const ParseError& e) {
        EXPECT_EQ(e.field(), "hop_count");
    }
}

TEST(PowerJson, InfiniteIsAString) {
    EXPECT_EQ(io::power_to_json(kInfinitePower), io::Json("inf"));
    io::Json j{{"p", "inf"}, {"q", 3.5}};
    EXPECT_EQ(io::power_from_json(j, "p"), kInfinitePower);
    EXPECT_EQ(io::power_from_json(j, "q"), 3.5);
}

TEST(ConfigDocument, BundledReferenceConfig) {
    const auto c = load_config(fx::source_path("configs/paper_alpha2.json"));
    EXPECT_EQ(c.topology.node_count, 47);
    EXPECT_EQ(c.topology.jammer_count, 17);
    EXPECT_DOUBLE_EQ(c.topology.road.a, 0.3);
    EXPECT_DOUBLE_EQ(c.topology.road.b, -70.0);
    EXPECT_DOUBLE_EQ(c.jammer_power_w, 0.1);
    EXPECT_DOUBLE_EQ(c.qos.alpha, 2.0);
    EXPECT_DOUBLE_EQ(c.qos.T, 0.1);
    EXPECT_DOUBLE_EQ(c.qos.p_max, 15.0);
    EXPECT_DOUBLE_EQ(c.qos.gamma, std::exp2(c.qos.rho) - 1.0);
}

TEST(ConfigDocument, AllBundledConfigsLoad) {
    for (const auto* name : {"paper_alpha2", "paper_alpha3", "sweep_T", "sweep_pmax", "small_oracle"}) {
        EXPECT_NO_THROW(load_config(fx::source_path(std::string("configs/") + name + ".json"))) << name;
    }
    const auto t = load_config(fx::source_path("configs/sweep_T.json"));
    ASSERT_TRUE(t.sweep);
    EXPECT_EQ(t.qos.p_max, kInfinitePower);
}

TEST(ConfigDocument, RoundTrip) {
    auto c = load_config(fx::source_path("configs/sweep_pmax.json"));
    const auto path = scratch("config.json").string();
    save_config(path, c);
    EXPECT_EQ(load_config(path), c);
}

TEST(ConfigDocument, MissingFieldIsNamed) {
    auto j = to_json(load_config(fx::source_path("configs/paper_alpha2.json")));
    j["qos"].erase("alpha");
    try {
        config_from_json(j);
        FAIL() << "expected ParseError";
    } catch (const ParseError& e) {
        EXPECT_EQ(e.field(), "qos.alpha");
    }
}

TEST(ConfigDocument, WrongTypeIsNamed) {
    auto j = to_json(load_config(fx::source_path("configs/paper_alpha2.json")));
    j["seeds"] = "many";
    try {
        config_from_json(j);
        FAIL() << "expected ParseError";
    } catch (const ParseError& e) {
        EXPECT_EQ(e.field(), "seeds");
    }
}

TEST(ConfigDocument, InvalidValuesRejected) {
    auto j = to_json(load_config(fx::source_path("configs/paper_alpha2.json")));
    j["qos"]["T"] = 1.5;
    EXPECT_THROW(config_from_json(j), ParseError);
}
