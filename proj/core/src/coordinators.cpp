#include "crossflow/coordinators.hpp"

#include <algorithm>
#include <map>
#include <stdexcept>

namespace crossflow {

VirtualLaneSet build_virtual_lanes(const RoadNetwork& net, std::span<const Vehicle> vehicles) {
    VirtualLaneSet set;
    set.lanes.reserve(net.lanes().size());
    for (const Lane& l : net.lanes()) {
        set.lanes.push_back(build_virtual_lane(net, l.id, vehicles));
    }
    return set;
}

std::vector<VehicleAssessment> assess_vehicles(const RoadNetwork& net,
                                               const VirtualLaneSet& vlanes,
                                               std::span<const Vehicle> vehicles,
                                               const SvParams& sv_params, int di_neighbors,
                                               double edge_radius) {
    std::vector<VehicleAssessment> out;
    out.reserve(vehicles.size());
    std::vector<double> positions;
    for (const Vehicle& v : vehicles) {
        const VirtualLane& vl = vlanes.for_lane(v.lane);
        const int self = vl.index_of(v.id);
        if (self < 0) throw std::logic_error("assess_vehicles: vehicle missing from own lane");

        VehicleAssessment a;
        a.id = v.id;
        a.lane = v.lane;
        a.sv = combined_sv_for(vl, v.id, sv_params).combined;

        if (static_cast<size_t>(self) + 1 < vl.entries.size()) {
            a.front_gap = vl.entries[static_cast<size_t>(self) + 1].pos - v.pos;
            a.front_vel = vl.entries[static_cast<size_t>(self) + 1].vel;
        }
        if (self > 0) {
            a.rear_gap = v.pos - vl.entries[static_cast<size_t>(self) - 1].pos;
        }

        positions.clear();
        positions.reserve(vl.entries.size());
        for (const VirtualLaneEntry& e : vl.entries) positions.push_back(e.pos);
        a.di = density_indicator(positions, self, di_neighbors);

        for (int cid : net.conflicts_on(v.lane)) {
            const ConflictPoint& cp = net.conflict_point(cid);
            const double d = net.conflict_pos_on(cp, v.lane) - v.pos;
            if (d >= 0.0 && d < a.conflict_dist) {
                a.conflict_dist = d;
                if (d <= edge_radius) {
                    a.edge_row = cp.grid_row;
                    a.edge_col = cp.grid_col;
                }
            }
        }
        out.push_back(a);
    }
    return out;
}

namespace {

TierDecision make_decision(const VirtualLaneSet& vlanes,
                           const std::map<std::int64_t, int>& lane_of,
                           std::vector<std::int64_t> ids, int width, int row, int col) {
    std::vector<DecisionContext> ctx;
    ctx.reserve(ids.size());
    for (std::int64_t id : ids) {
        ctx.push_back({id, &vlanes.for_lane(lane_of.at(id))});
    }
    TierDecision d;
    d.edge_row = row;
    d.edge_col = col;
    d.graph = build_state_graph(ctx, width);
    d.ids = std::move(ids);
    return d;
}

}  // namespace

std::vector<TierDecision> edge_decisions(const RoadNetwork& net, const VirtualLaneSet& vlanes,
                                         std::span<const VehicleAssessment> assessments,
                                         int width) {
    std::map<std::int64_t, int> lane_of;
    std::map<std::pair<int, int>, std::vector<ScoredVehicle>> groups;
    for (const VehicleAssessment& a : assessments) {
        lane_of[a.id] = a.lane;
        if (a.edge_row >= 0) {
            groups[{a.edge_row, a.edge_col}].push_back({a.id, a.sv, a.conflict_dist});
        }
    }
    (void)net;
    std::vector<TierDecision> out;
    out.reserve(groups.size());
    for (auto& [key, scored] : groups) {
        auto ids = select_decision_vehicles_edge(std::move(scored), width);
        out.push_back(make_decision(vlanes, lane_of, std::move(ids), width, key.first, key.second));
    }
    return out;
}

TierDecision cloud_decision(const VirtualLaneSet& vlanes,
                            std::span<const VehicleAssessment> assessments, int width) {
    std::map<std::int64_t, int> lane_of;
    std::vector<ScoredVehicle> scored;
    scored.reserve(assessments.size());
    for (const VehicleAssessment& a : assessments) {
        lane_of[a.id] = a.lane;
        scored.push_back({a.id, a.di, a.conflict_dist});
    }
    auto ids = select_decision_vehicles_cloud(std::move(scored), width);
    return make_decision(vlanes, lane_of, std::move(ids), width, -1, -1);
}

}  // namespace crossflow
