#pragma once

#include <cstdint>
#include <limits>
#include <span>
#include <vector>

#include "crossflow/assessment.hpp"
#include "crossflow/state_graph.hpp"
#include "crossflow/virtual_lane.hpp"

namespace crossflow {

/// One virtual lane per base lane, built from the same population snapshot.
struct VirtualLaneSet {
    std::vector<VirtualLane> lanes;  // indexed by lane id
    const VirtualLane& for_lane(int lane) const { return lanes[static_cast<size_t>(lane)]; }
};

VirtualLaneSet build_virtual_lanes(const RoadNetwork& net, std::span<const Vehicle> vehicles);

/// Per-step scoring of one vehicle on its own lane's virtual lane.
struct VehicleAssessment {
    std::int64_t id = -1;
    int lane = -1;
    double sv = 0.0;          // combined safety value
    double front_gap = std::numeric_limits<double>::infinity();  // to nearest downstream entry
    double front_vel = std::numeric_limits<double>::infinity();  // that entry's velocity
    double rear_gap = std::numeric_limits<double>::infinity();   // to nearest upstream entry
    double di = 0.0;          // density indicator
    double conflict_dist = std::numeric_limits<double>::infinity();  // to nearest crossing ahead
    int edge_row = -1;        // intersection in whose control region the
    int edge_col = -1;        //   vehicle sits, or -1/-1 when unassigned
};

/// Scores every vehicle and assigns it to the next intersection ahead on
/// its lane, if that center lies within `edge_radius` meters.
std::vector<VehicleAssessment> assess_vehicles(const RoadNetwork& net,
                                               const VirtualLaneSet& vlanes,
                                               std::span<const Vehicle> vehicles,
                                               const SvParams& sv_params = {},
                                               int di_neighbors = 5,
                                               double edge_radius = 150.0);

struct TierDecision {
    int edge_row = -1;  // -1 for the cloud tier
    int edge_col = -1;
    StateGraph graph;
    std::vector<std::int64_t> ids;  // == graph.column_vehicles
};

/// One decision per intersection that currently has assigned vehicles:
/// up to `width` of them by ascending safety value (the most endangered
/// first), observed through their own-lane virtual lanes.
std::vector<TierDecision> edge_decisions(const RoadNetwork& net, const VirtualLaneSet& vlanes,
                                         std::span<const VehicleAssessment> assessments,
                                         int width = 15);

/// Single network-wide decision: up to `width` vehicles by descending
/// density indicator. Returns an empty-id decision when no vehicles exist.
TierDecision cloud_decision(const VirtualLaneSet& vlanes,
                            std::span<const VehicleAssessment> assessments, int width = 60);

}  // namespace crossflow
