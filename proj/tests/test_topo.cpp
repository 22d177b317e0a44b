#include <gtest/gtest.h>

#include <cmath>

#include "support.hpp"
#include "vroute/io.hpp"
#include "vroute/topo.hpp"

using namespace vroute;

namespace {

TopologyConfig reference_config(std::uint64_t seed) {
    TopologyConfig c;
    c.node_count = 47;
    c.jammer_count = 17;
    c.road = RoadLine::from_general(3, 10, -700);
    c.rng_seed = seed;
    return c;
}

}  // namespace

TEST(GenerateTopology, FixedCountsGiveRequestedSizes) {
    const auto t = generate_topology(reference_config(1), 0.1);
    EXPECT_EQ(t.nodes.size(), 47u);
    ASSERT_EQ(t.jammers.size(), 17u);
    for (const auto& j : t.jammers) EXPECT_DOUBLE_EQ(j.power_w, 0.1);
}

TEST(GenerateTopology, SameSeedSameTopology) {
    const auto a = generate_topology(reference_config(7), 0.1);
    const auto b = generate_topology(reference_config(7), 0.1);
    EXPECT_EQ(a, b);
    EXPECT_EQ(io::dump_topology(a), io::dump_topology(b));
}

TEST(GenerateTopology, DifferentSeedsDiffer) {
    EXPECT_NE(generate_topology(reference_config(1), 0.1), generate_topology(reference_config(2), 0.1));
}

TEST(GenerateTopology, ZeroJammerIntensityGivesNoJammers) {
    auto c = reference_config(3);
    c.jammer_count.reset();
    c.jammer_intensity = 0.0;
    EXPECT_TRUE(generate_topology(c, 0.1).jammers.empty());
}

TEST(GenerateTopology, IntensityMode) {
    auto c = reference_config(4);
    c.node_count.reset();
    c.jammer_count.reset();
    c.node_intensity = 47;
    c.jammer_intensity = 17;
    const auto t = generate_topology(c, 0.1);
    EXPECT_GE(t.nodes.size(), 2u);
}

TEST(GenerateTopology, NonIntersectingRoadIsConfigError) {
    auto c = reference_config(1);
    c.road = RoadLine{0.0, -500.0};  // y = 500
    EXPECT_THROW(generate_topology(c, 0.1), ConfigError);
}

TEST(GenerateTopology, SingleNodeIsConfigError) {
    auto c = reference_config(1);
    c.node_count = 1;
    EXPECT_THROW(generate_topology(c, 0.1), ConfigError);
}

TEST(GenerateTopology, ImpossibleSplitGivesGenerationError) {
    auto c = reference_config(1);
    c.node_count = 2;
    c.source_id = 0;
    c.dest_id = 0;
    EXPECT_THROW(generate_topology(c, 0.1), GenerationError);
}

TEST(GenerateTopology, Invariants) {
    for (std::uint64_t seed = 1; seed <= 20; ++seed) {
        const auto t = generate_topology(reference_config(seed), 0.1);
        const int side = t.road.evaluate(t.source().pos) > 0.0 ? 1 : -1;
        EXPECT_EQ(t.source().plane, Plane::A);
        EXPECT_EQ(t.dest().plane, Plane::B);
        for (std::size_t i = 0; i < t.nodes.size(); ++i) {
            EXPECT_EQ(t.nodes[i].id, static_cast<NodeId>(i));
            EXPECT_EQ(t.nodes[i].plane, plane_of(t.nodes[i].pos, t.road, side));
        }
        const auto theta = handoff_candidates(t);
        EXPECT_FALSE(theta.empty());
        for (auto id : theta) EXPECT_EQ(t.node(id).plane, Plane::B);
        for (std::size_t i = 0; i < t.road_points.size(); ++i) {
            EXPECT_NEAR(t.road.evaluate(t.road_points[i]), 0.0, 1e-9);
            if (i + 2 < t.road_points.size()) {
                EXPECT_NEAR(distance(t.road_points[i], t.road_points[i + 1]), 1.0, 1e-9);
            }
        }
    }
}

TEST(PlaneOf, SourceSideIsA) {
    const auto road = RoadLine::from_general(3, 10, -700);
    const int side = road.evaluate({0, 0}) > 0 ? 1 : -1;
    EXPECT_EQ(side, -1);
    EXPECT_EQ(plane_of({0, 0}, road, side), Plane::A);
    EXPECT_EQ(plane_of({100, 100}, road, side), Plane::B);
}

TEST(PlaneOf, PointOnLineThrows) {
    const auto road = RoadLine::from_general(3, 10, -700);
    EXPECT_THROW(plane_of({0, 70}, road, -1), DegeneratePositionError);
}

TEST(DiscretizeRoad, HorizontalRoad) {
    const auto pts = discretize_road(RoadLine{0.0, -50.0}, Area{}, 50.0);
    ASSERT_EQ(pts.size(), 3u);
    EXPECT_EQ(pts[0], (Point{0, 50}));
    EXPECT_EQ(pts[1], (Point{50, 50}));
    EXPECT_EQ(pts[2], (Point{100, 50}));
}

TEST(DiscretizeRoad, SlopedRoadEndpoints) {
    const auto pts = discretize_road(RoadLine::from_general(3, 10, -700), Area{}, 1.0);
    ASSERT_GE(pts.size(), 2u);
    EXPECT_NEAR(pts.front().x, 0.0, 1e-12);
    EXPECT_NEAR(pts.front().y, 70.0, 1e-12);
    EXPECT_NEAR(pts.back().x, 100.0, 1e-12);
    EXPECT_NEAR(pts.back().y, 40.0, 1e-12);
    // length sqrt(100^2 + 30^2) = 104.4 m -> 105 steps of 1 m plus the end
    EXPECT_EQ(pts.size(), 106u);
}

TEST(DiscretizeRoad, LargeStepGivesEndpointsOnly) {
    const auto pts = discretize_road(RoadLine::from_general(3, 10, -700), Area{}, 1000.0);
    ASSERT_EQ(pts.size(), 2u);
    EXPECT_NEAR(pts[0].y, 70.0, 1e-12);
    EXPECT_NEAR(pts[1].y, 40.0, 1e-12);
}

TEST(DiscretizeRoad, Errors) {
    EXPECT_THROW(discretize_road(RoadLine{0.0, 10.0}, Area{}, 1.0), ConfigError);
    EXPECT_THROW(discretize_road(RoadLine{0.0, -50.0}, Area{}, 0.0), ConfigError);
}

TEST(HandoffCandidates, SinglePlaneBNode) {
    const auto t = fixtures::make_topology({{10, 10}, {60, 90}}, {}, 0.1, fixtures::horizontal_road(), 1, 50.0);
    EXPECT_EQ(handoff_candidates(t), std::vector<NodeId>{1});
}

TEST(HandoffCandidates, SymmetricPair) {
    // road y=50 sampled at x = 0, 50, 100; plane-B nodes mirror each other about x=50
    const auto t = fixtures::make_topology({{50, 10}, {20, 60}, {80, 60}}, {}, 0.1, fixtures::horizontal_road(), 2, 50.0);
    ASSERT_EQ(t.road_points.size(), 3u);
    EXPECT_EQ(handoff_candidates(t), (std::vector<NodeId>{1, 2}));
}

TEST(HandoffCandidates, NoPlaneBIsError) {
    auto t = fixtures::make_topology({{10, 10}, {60, 20}}, {}, 0.1, fixtures::horizontal_road(), 1);
    EXPECT_THROW(handoff_candidates(t), ConfigError);
}

TEST(Distance, Examples) {
    EXPECT_DOUBLE_EQ(distance({0, 0}, {3, 4}), 5.0);
    EXPECT_DOUBLE_EQ(distance({1, 1}, {1, 1}), 0.0);
    EXPECT_NEAR(distance({0, 0}, {100, 100}), std::sqrt(20000.0), 1e-12);
}

TEST(RoadLine, FromGeneralRejectsVertical) {
    EXPECT_THROW(RoadLine::from_general(1, 0, -50), ConfigError);
    const auto r = RoadLine::from_general(3, 10, -700);
    EXPECT_DOUBLE_EQ(r.a, 0.3);
    EXPECT_DOUBLE_EQ(r.b, -70.0);
}
