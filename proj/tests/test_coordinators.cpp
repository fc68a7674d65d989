#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <random>
#include <set>
#include <utility>
#include <vector>

#include "crossflow/coordinators.hpp"

using namespace crossflow;

namespace {

Vehicle make(std::int64_t id, int lane, double pos, double vel = 10.0, double acc = 0.0) {
    Vehicle v;
    v.id = id;
    v.lane = lane;
    v.pos = pos;
    v.vel = vel;
    v.acc = acc;
    return v;
}

std::vector<Vehicle> random_population(const RoadNetwork& net, std::mt19937_64& rng, int n) {
    std::uniform_int_distribution<int> lane_pick(0, static_cast<int>(net.lanes().size()) - 1);
    std::uniform_real_distribution<double> vel(6.0, 13.0);
    std::uniform_real_distribution<double> acc(-3.0, 3.0);
    std::vector<Vehicle> vs;
    for (int i = 0; i < n; ++i) {
        const int l = lane_pick(rng);
        std::uniform_real_distribution<double> pos(0.0, net.lane(l).length);
        vs.push_back(make(i, l, pos(rng), vel(rng), acc(rng)));
    }
    return vs;
}

const VehicleAssessment& find_assessment(const std::vector<VehicleAssessment>& as,
                                         std::int64_t id) {
    for (const VehicleAssessment& a : as) {
        if (a.id == id) return a;
    }
    REQUIRE(false);
    return as.front();
}

}  // namespace

TEST_CASE("build_virtual_lanes produces one view per lane") {
    RoadNetwork net(2, 2);
    std::mt19937_64 rng(1);
    const auto vs = random_population(net, rng, 20);
    const VirtualLaneSet set = build_virtual_lanes(net, vs);
    REQUIRE(set.lanes.size() == net.lanes().size());
    for (const Lane& l : net.lanes()) {
        CHECK(set.for_lane(l.id).base_lane == l.id);
    }
}

TEST_CASE("assessment geometry on a scripted intersection") {
    RoadNetwork net(1, 1);
    const std::vector<Vehicle> vs = {make(0, 0, 120.0, 12.0, 0.0),
                                     make(1, 0, 135.0, 8.0, -1.0),
                                     make(2, 0, 100.0, 10.0, 0.0)};
    const VirtualLaneSet set = build_virtual_lanes(net, vs);
    const auto as = assess_vehicles(net, set, vs);
    REQUIRE(as.size() == 3);

    const VehicleAssessment& mid = find_assessment(as, 0);
    CHECK(mid.front_gap == doctest::Approx(15.0).epsilon(1e-12));
    CHECK(mid.front_vel == doctest::Approx(8.0).epsilon(1e-12));
    CHECK(mid.rear_gap == doctest::Approx(20.0).epsilon(1e-12));
    // 30 m before the only intersection, inside the 150 m control radius
    CHECK(mid.conflict_dist == doctest::Approx(30.0).epsilon(1e-12));
    CHECK(mid.edge_row == 0);
    CHECK(mid.edge_col == 0);
    // the combined SV matches the assessment-module computation
    CHECK(mid.sv ==
          doctest::Approx(combined_sv_for(set.for_lane(0), 0).combined).epsilon(1e-12));

    const VehicleAssessment& tail = find_assessment(as, 2);
    CHECK(std::isinf(tail.rear_gap));
    const VehicleAssessment& head = find_assessment(as, 1);
    CHECK(std::isinf(head.front_gap));
}

TEST_CASE("vehicles past their last conflict are unassigned") {
    RoadNetwork net(1, 1);
    const std::vector<Vehicle> vs = {make(0, 0, 200.0)};  // center at 150, already past
    const VirtualLaneSet set = build_virtual_lanes(net, vs);
    const auto as = assess_vehicles(net, set, vs);
    CHECK(as[0].edge_row == -1);
    CHECK(as[0].edge_col == -1);
}

TEST_CASE("edge decisions select the lowest safety values per intersection") {
    RoadNetwork net(1, 1);
    std::mt19937_64 rng(2);
    for (int trial = 0; trial < 30; ++trial) {
        const auto vs = random_population(net, rng, 30);
        const VirtualLaneSet set = build_virtual_lanes(net, vs);
        const auto as = assess_vehicles(net, set, vs);
        const auto decisions = edge_decisions(net, set, as, 15);
        REQUIRE(decisions.size() <= 1);
        if (decisions.empty()) continue;
        const TierDecision& d = decisions[0];
        CHECK(d.ids.size() <= 15);
        CHECK(d.ids == d.graph.column_vehicles);
        CHECK(d.graph.width == 15);

        // brute-force oracle over the vehicles assigned to this intersection
        std::vector<ScoredVehicle> scored;
        for (const VehicleAssessment& a : as) {
            if (a.edge_row == d.edge_row && a.edge_col == d.edge_col) {
                scored.push_back({a.id, a.sv, a.conflict_dist});
            }
        }
        CHECK(d.ids == select_decision_vehicles_edge(scored, 15));
    }
}

TEST_CASE("edge decisions are grouped by intersection on a grid") {
    RoadNetwork net(2, 2);
    std::mt19937_64 rng(3);
    const auto vs = random_population(net, rng, 60);
    const VirtualLaneSet set = build_virtual_lanes(net, vs);
    const auto as = assess_vehicles(net, set, vs);
    const auto decisions = edge_decisions(net, set, as, 15);
    CHECK(decisions.size() <= 4);
    std::set<std::pair<int, int>> seen;
    std::set<std::int64_t> all_ids;
    for (const TierDecision& d : decisions) {
        CHECK(seen.insert({d.edge_row, d.edge_col}).second);  // one per intersection
        for (std::int64_t id : d.ids) CHECK(all_ids.insert(id).second);  // disjoint
    }
}

TEST_CASE("cloud decision selects the highest density indicators") {
    RoadNetwork net(3, 3);
    std::mt19937_64 rng(4);
    for (int trial = 0; trial < 20; ++trial) {
        const auto vs = random_population(net, rng, 70);
        const VirtualLaneSet set = build_virtual_lanes(net, vs);
        const auto as = assess_vehicles(net, set, vs);
        const TierDecision d = cloud_decision(set, as, 60);
        CHECK(d.edge_row == -1);
        CHECK(d.ids.size() <= 60);
        CHECK(d.ids == d.graph.column_vehicles);
        CHECK(d.graph.width == 60);

        std::vector<ScoredVehicle> scored;
        for (const VehicleAssessment& a : as) scored.push_back({a.id, a.di, a.conflict_dist});
        CHECK(d.ids == select_decision_vehicles_cloud(scored, 60));
    }
}

TEST_CASE("cloud decision on an empty population is empty") {
    RoadNetwork net(1, 1);
    const VirtualLaneSet set = build_virtual_lanes(net, {});
    const TierDecision d = cloud_decision(set, {}, 60);
    CHECK(d.ids.empty());
}

TEST_CASE("decisions are pure: re-running on the same snapshot is identical") {
    RoadNetwork net(2, 2);
    std::mt19937_64 rng(5);
    const auto vs = random_population(net, rng, 50);
    const VirtualLaneSet set = build_virtual_lanes(net, vs);
    const auto as = assess_vehicles(net, set, vs);
    const auto d1 = edge_decisions(net, set, as, 15);
    const auto d2 = edge_decisions(net, set, as, 15);
    REQUIRE(d1.size() == d2.size());
    for (size_t i = 0; i < d1.size(); ++i) {
        CHECK(d1[i].ids == d2[i].ids);
        CHECK(d1[i].graph.values == d2[i].graph.values);
    }
    const TierDecision c1 = cloud_decision(set, as, 60);
    const TierDecision c2 = cloud_decision(set, as, 60);
    CHECK(c1.ids == c2.ids);
    CHECK(c1.graph.values == c2.graph.values);
}
