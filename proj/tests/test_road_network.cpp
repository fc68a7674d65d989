#include <doctest.h>

#include <set>
#include <stdexcept>

#include "crossflow/road_network.hpp"

using namespace crossflow;

TEST_CASE("grid lane and conflict counts") {
    RoadNetwork one(1, 1);
    CHECK(one.lanes().size() == 4);
    CHECK(one.conflict_points().size() == 4);

    RoadNetwork big(3, 3);
    CHECK(big.lanes().size() == 12);
    CHECK(big.conflict_points().size() == 36);

    RoadNetwork rect(2, 5);
    CHECK(rect.lanes().size() == 2 * (2 + 5));
    CHECK(rect.conflict_points().size() == 4 * 2 * 5);
}

TEST_CASE("degenerate grids are rejected") {
    CHECK_THROWS_AS(RoadNetwork(1, 0), std::invalid_argument);
    CHECK_THROWS_AS(RoadNetwork(0, 1), std::invalid_argument);
    CHECK_THROWS_AS(RoadNetwork(1, 1, 0.0), std::invalid_argument);
    CHECK_THROWS_AS(RoadNetwork(1, 1, -5.0), std::invalid_argument);
}

TEST_CASE("lane lengths span the grid plus entry and exit cells") {
    RoadNetwork net(3, 2, 150.0);
    for (const Lane& l : net.lanes()) {
        if (l.axis == Axis::Horizontal) {
            CHECK(l.length == doctest::Approx(3 * 150.0).epsilon(1e-15));
        } else {
            CHECK(l.length == doctest::Approx(4 * 150.0).epsilon(1e-15));
        }
    }
}

TEST_CASE("single intersection conflicts sit at the center on every lane") {
    RoadNetwork net(1, 1, 150.0);
    for (const ConflictPoint& cp : net.conflict_points()) {
        CHECK(cp.pos_on_a == 150.0);
        CHECK(cp.pos_on_b == 150.0);
        CHECK(net.lane(cp.lane_a).axis == Axis::Horizontal);
        CHECK(net.lane(cp.lane_b).axis == Axis::Vertical);
    }
}

TEST_CASE("conflicts_on is sorted by position along the lane") {
    RoadNetwork net(3, 3, 150.0);
    for (const Lane& l : net.lanes()) {
        double prev = -1.0;
        for (int cid : net.conflicts_on(l.id)) {
            const double p = net.conflict_pos_on(net.conflict_point(cid), l.id);
            CHECK(p >= prev);
            prev = p;
        }
        // each lane crosses every perpendicular lane exactly once
        const size_t perpendicular =
            l.axis == Axis::Horizontal ? 2 * net.cols() : 2 * net.rows();
        CHECK(net.conflicts_on(l.id).size() == perpendicular);
    }
}

TEST_CASE("conflicts_between perpendicular lanes yields exactly one crossing") {
    RoadNetwork net(2, 2, 150.0);
    for (const Lane& a : net.lanes()) {
        for (const Lane& b : net.lanes()) {
            const auto shared = net.conflicts_between(a.id, b.id);
            if (a.axis == b.axis) {
                CHECK(shared.empty());
            } else {
                CHECK(shared.size() == 1);
            }
        }
    }
}

TEST_CASE("conflict_pos_on rejects unrelated lanes") {
    RoadNetwork net(1, 1);
    const ConflictPoint& cp = net.conflict_point(0);
    int other = -1;
    for (const Lane& l : net.lanes()) {
        if (l.id != cp.lane_a && l.id != cp.lane_b) other = l.id;
    }
    REQUIRE(other >= 0);
    CHECK_THROWS_AS(net.conflict_pos_on(cp, other), std::invalid_argument);
}

TEST_CASE("world positions are consistent with intersection centers") {
    RoadNetwork net(2, 3, 150.0);
    for (int r = 0; r < net.rows(); ++r) {
        for (int c = 0; c < net.cols(); ++c) {
            const auto center = net.intersection_centers()[static_cast<size_t>(r) * net.cols() + c];
            for (const Lane& l : net.lanes()) {
                const double s = net.center_pos_on_lane(r, c, l.id);
                if (s < 0.0) continue;
                const auto p = net.world_pos(l.id, s);
                CHECK(p[0] == doctest::Approx(center[0]).epsilon(1e-15));
                CHECK(p[1] == doctest::Approx(center[1]).epsilon(1e-15));
            }
        }
    }
}
