#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "crossflow/road_network.hpp"
#include "crossflow/world.hpp"

namespace crossflow {

struct VirtualLaneEntry {
    std::int64_t vehicle_id = -1;
    double pos = 0.0;   // position on the base lane (true or projected)
    double vel = 0.0;
    double acc = 0.0;
    int origin_lane = -1;
    int via_conflict = -1;  // -1: vehicle travels on the base lane itself
};

/// One-dimensional view of a base lane: its own vehicles at true positions
/// plus crossing-lane vehicles projected through conflict points, sorted by
/// projected position.
struct VirtualLane {
    int base_lane = -1;
    double base_length = 0.0;
    std::vector<VirtualLaneEntry> entries;  // sorted by pos

    /// Index of the entry for `id`, or -1.
    int index_of(std::int64_t id) const;
};

/// Signed distance-preserving projection of a crossing vehicle through a
/// conflict point onto the conflict's other lane: a vehicle d meters before
/// its conflict point lands d meters before it on the base lane.
double project(const ConflictPoint& cp, int vehicle_lane, double vehicle_pos, int base_lane);

/// Builds the virtual lane for `base_lane` from a population snapshot.
/// Crossing vehicles project through the nearest conflict point with the
/// base lane at-or-ahead of them; vehicles past their last such conflict
/// can no longer interact and are excluded.
VirtualLane build_virtual_lane(const RoadNetwork& net, int base_lane,
                               std::span<const Vehicle> vehicles);

struct Neighbor {
    int entry_index = -1;
    double gap = 0.0;  // signed, positive = downstream of the query vehicle
};

/// Up to k entries nearest to `vehicle_id` by |gap|, ascending; ties in
/// |gap| break toward the downstream vehicle, then by id.
std::vector<Neighbor> nearest_neighbors(const VirtualLane& vlane, std::int64_t vehicle_id, int k);

}  // namespace crossflow
