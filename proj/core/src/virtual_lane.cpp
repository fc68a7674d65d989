#include "crossflow/virtual_lane.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace crossflow {

int VirtualLane::index_of(std::int64_t id) const {
    for (size_t i = 0; i < entries.size(); ++i) {
        if (entries[i].vehicle_id == id) return static_cast<int>(i);
    }
    return -1;
}

double project(const ConflictPoint& cp, int vehicle_lane, double vehicle_pos, int base_lane) {
    double pos_on_vehicle_lane;
    double pos_on_base;
    if (cp.lane_a == vehicle_lane && cp.lane_b == base_lane) {
        pos_on_vehicle_lane = cp.pos_on_a;
        pos_on_base = cp.pos_on_b;
    } else if (cp.lane_b == vehicle_lane && cp.lane_a == base_lane) {
        pos_on_vehicle_lane = cp.pos_on_b;
        pos_on_base = cp.pos_on_a;
    } else {
        throw std::invalid_argument("project: conflict does not join the two lanes");
    }
    return pos_on_base - (pos_on_vehicle_lane - vehicle_pos);
}

VirtualLane build_virtual_lane(const RoadNetwork& net, int base_lane,
                               std::span<const Vehicle> vehicles) {
    const Lane& base = net.lane(base_lane);
    VirtualLane out;
    out.base_lane = base_lane;
    out.base_length = base.length;

    for (const Vehicle& v : vehicles) {
        if (v.lane == base_lane) {
            out.entries.push_back({v.id, v.pos, v.vel, v.acc, v.lane, -1});
            continue;
        }
        const Lane& other = net.lane(v.lane);
        if (other.axis == base.axis) continue;  // parallel lanes never conflict

        // Nearest conflict with the base lane at-or-ahead of the vehicle.
        int best = -1;
        double best_dist = std::numeric_limits<double>::infinity();
        for (int cp_id : net.conflicts_on(v.lane)) {
            const ConflictPoint& cp = net.conflict_point(cp_id);
            if (cp.lane_a != base_lane && cp.lane_b != base_lane) continue;
            const double d = net.conflict_pos_on(cp, v.lane) - v.pos;
            if (d >= 0.0 && d < best_dist) {
                best_dist = d;
                best = cp_id;
            }
        }
        if (best < 0) continue;  // past its last conflict with this base lane
        const double p = project(net.conflict_point(best), v.lane, v.pos, base_lane);
        out.entries.push_back({v.id, p, v.vel, v.acc, v.lane, best});
    }

    std::sort(out.entries.begin(), out.entries.end(),
              [](const VirtualLaneEntry& a, const VirtualLaneEntry& b) {
                  if (a.pos != b.pos) return a.pos < b.pos;
                  return a.vehicle_id < b.vehicle_id;
              });
    return out;
}

std::vector<Neighbor> nearest_neighbors(const VirtualLane& vlane, std::int64_t vehicle_id, int k) {
    const int self = vlane.index_of(vehicle_id);
    if (self < 0) throw std::invalid_argument("nearest_neighbors: vehicle not on virtual lane");
    const double ego_pos = vlane.entries[static_cast<size_t>(self)].pos;

    std::vector<Neighbor> all;
    all.reserve(vlane.entries.size());
    for (size_t i = 0; i < vlane.entries.size(); ++i) {
        if (static_cast<int>(i) == self) continue;
        all.push_back({static_cast<int>(i), vlane.entries[i].pos - ego_pos});
    }
    std::sort(all.begin(), all.end(), [&](const Neighbor& a, const Neighbor& b) {
        const double da = std::abs(a.gap), db = std::abs(b.gap);
        if (da != db) return da < db;
        if ((a.gap > 0.0) != (b.gap > 0.0)) return a.gap > 0.0;  // downstream first
        return vlane.entries[static_cast<size_t>(a.entry_index)].vehicle_id <
               vlane.entries[static_cast<size_t>(b.entry_index)].vehicle_id;
    });
    if (static_cast<int>(all.size()) > k) all.resize(static_cast<size_t>(k));
    return all;
}

}  // namespace crossflow
