#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <random>
#include <stdexcept>
#include <vector>

#include "crossflow/state_graph.hpp"

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

std::vector<ScoredVehicle> random_scored(std::mt19937_64& rng, int n) {
    std::uniform_real_distribution<double> score(-20.0, 20.0);
    std::uniform_real_distribution<double> dist(0.0, 150.0);
    std::vector<ScoredVehicle> out;
    for (int i = 0; i < n; ++i) out.push_back({i, score(rng), dist(rng)});
    return out;
}

}  // namespace

TEST_CASE("edge selection orders by ascending safety value") {
    std::vector<ScoredVehicle> s = {{0, 5.0, 1.0}, {1, -2.0, 1.0}, {2, 7.0, 1.0}};
    const auto ids = select_decision_vehicles_edge(s, 15);
    CHECK(ids == std::vector<std::int64_t>{1, 0, 2});
}

TEST_CASE("edge selection caps at the graph width") {
    std::mt19937_64 rng(1);
    const auto s = random_scored(rng, 20);
    CHECK(select_decision_vehicles_edge(s, 15).size() == 15);
    CHECK(select_decision_vehicles_edge({}, 15).empty());
}

TEST_CASE("uniform scores fall back to the deterministic tie-break") {
    std::vector<ScoredVehicle> s = {{3, 1.0, 9.0}, {1, 1.0, 4.0}, {2, 1.0, 4.0}, {0, 1.0, 7.0}};
    const auto edge = select_decision_vehicles_edge(s, 15);
    CHECK(edge == std::vector<std::int64_t>{1, 2, 0, 3});  // conflict distance, then id
    const auto cloud = select_decision_vehicles_cloud(s, 60);
    CHECK(cloud == std::vector<std::int64_t>{1, 2, 0, 3});
}

TEST_CASE("cloud selection orders by descending density indicator") {
    std::vector<ScoredVehicle> s = {{0, 0.5, 1.0}, {1, 3.0, 1.0}, {2, 1.5, 1.0}};
    const auto ids = select_decision_vehicles_cloud(s, 60);
    CHECK(ids == std::vector<std::int64_t>{1, 2, 0});
}

TEST_CASE("cloud selection caps at 60") {
    std::mt19937_64 rng(2);
    const auto s = random_scored(rng, 70);
    CHECK(select_decision_vehicles_cloud(s, 60).size() == 60);
}

TEST_CASE("selection is invariant under strictly increasing score transforms") {
    std::mt19937_64 rng(3);
    for (int trial = 0; trial < 50; ++trial) {
        auto s = random_scored(rng, 30);
        const auto base = select_decision_vehicles_edge(s, 15);
        auto mapped = s;
        for (auto& v : mapped) v.score = std::exp(v.score / 10.0) + 3.0 * v.score;
        CHECK(select_decision_vehicles_edge(mapped, 15) == base);

        const auto base_cloud = select_decision_vehicles_cloud(s, 15);
        CHECK(select_decision_vehicles_cloud(mapped, 15) == base_cloud);
    }
}

TEST_CASE("state graph of empty traffic is all zeros") {
    const StateGraph sg = build_state_graph({}, 15);
    CHECK(sg.width == 15);
    CHECK(sg.column_vehicles.empty());
    CHECK(sg.values.size() == 3u * 15 * 15);
    for (double v : sg.values) CHECK(v == 0.0);
}

TEST_CASE("state graph assembly on a scripted lane") {
    RoadNetwork net(1, 1);
    const std::vector<Vehicle> vs = {make(0, 0, 100.0, 13.0, 3.0), make(1, 0, 110.0, 6.5, -1.5),
                                     make(2, 0, 130.0, 10.0, 0.0)};
    const VirtualLane vl = build_virtual_lane(net, 0, vs);
    const std::vector<DecisionContext> decisions = {{0, &vl}, {1, &vl}};
    const StateGraph sg = build_state_graph(decisions, 15);

    REQUIRE(sg.column_vehicles.size() == 2);
    CHECK(sg.column_vehicles[0] == 0);
    CHECK(sg.column_vehicles[1] == 1);

    // row 0: the decision vehicle's own kinetics; self-offset is zero
    CHECK(sg.at(0, 0, 0) == 0.0);
    CHECK(sg.at(0, 0, 1) == doctest::Approx(13.0 / 13.0).epsilon(1e-15));
    CHECK(sg.at(0, 0, 2) == doctest::Approx(3.0 / 3.0).epsilon(1e-15));
    CHECK(sg.at(0, 1, 1) == doctest::Approx(6.5 / 13.0).epsilon(1e-15));
    CHECK(sg.at(0, 1, 2) == doctest::Approx(-1.5 / 3.0).epsilon(1e-15));

    // column 0 reference rows: vehicle 1 at +10 first, vehicle 2 at +30 second
    CHECK(sg.at(1, 0, 0) == doctest::Approx(10.0 / 300.0).epsilon(1e-15));
    CHECK(sg.at(2, 0, 0) == doctest::Approx(30.0 / 300.0).epsilon(1e-15));
    // column 1: vehicle 0 at -10 is nearest
    CHECK(sg.at(1, 1, 0) == doctest::Approx(-10.0 / 300.0).epsilon(1e-15));

    // padding: rows past the neighbor count and columns past the decisions
    for (int r = 3; r < 15; ++r) {
        for (int ch = 0; ch < 3; ++ch) CHECK(sg.at(r, 0, ch) == 0.0);
    }
    for (int c = 2; c < 15; ++c) {
        for (int r = 0; r < 15; ++r) {
            for (int ch = 0; ch < 3; ++ch) CHECK(sg.at(r, c, ch) == 0.0);
        }
    }
}

TEST_CASE("every entry is bounded to [-1, 1]") {
    RoadNetwork net(1, 1);
    std::mt19937_64 rng(4);
    std::uniform_real_distribution<double> pos(0.0, 300.0);
    std::uniform_real_distribution<double> vel(6.0, 13.0);
    std::uniform_real_distribution<double> acc(-3.0, 3.0);
    for (int trial = 0; trial < 20; ++trial) {
        std::vector<Vehicle> vs;
        for (int i = 0; i < 25; ++i) vs.push_back(make(i, 0, pos(rng), vel(rng), acc(rng)));
        const VirtualLane vl = build_virtual_lane(net, 0, vs);
        std::vector<DecisionContext> decisions;
        for (int i = 0; i < 15; ++i) decisions.push_back({i, &vl});
        const StateGraph sg = build_state_graph(decisions, 15);
        for (double v : sg.values) {
            CHECK(v >= -1.0);
            CHECK(v <= 1.0);
        }
    }
}

TEST_CASE("permuting the vehicle list never changes the tensor") {
    RoadNetwork net(1, 1);
    std::mt19937_64 rng(5);
    std::uniform_real_distribution<double> pos(0.0, 300.0);
    std::vector<Vehicle> vs;
    for (int i = 0; i < 12; ++i) vs.push_back(make(i, 0, pos(rng)));

    auto tensor_for = [&](const std::vector<Vehicle>& order) {
        const VirtualLane vl = build_virtual_lane(net, 0, order);
        std::vector<DecisionContext> decisions;
        for (int i = 0; i < 12; ++i) decisions.push_back({i, &vl});
        return build_state_graph(decisions, 15).values;
    };

    const auto base = tensor_for(vs);
    for (int trial = 0; trial < 10; ++trial) {
        std::shuffle(vs.begin(), vs.end(), rng);
        CHECK(tensor_for(vs) == base);
    }
}

TEST_CASE("decision vehicle missing from its lane is rejected") {
    RoadNetwork net(1, 1);
    const std::vector<Vehicle> vs = {make(0, 0, 100.0)};
    const VirtualLane vl = build_virtual_lane(net, 0, vs);
    const std::vector<DecisionContext> bad = {{99, &vl}};
    CHECK_THROWS_AS(build_state_graph(bad, 15), std::invalid_argument);
    const std::vector<DecisionContext> no_lane = {{0, nullptr}};
    CHECK_THROWS_AS(build_state_graph(no_lane, 15), std::invalid_argument);
}
