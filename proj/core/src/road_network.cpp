#include "crossflow/road_network.hpp"

#include <algorithm>
#include <stdexcept>

namespace crossflow {

RoadNetwork::RoadNetwork(int rows, int cols, double lane_length)
    : rows_(rows), cols_(cols), lane_length_(lane_length) {
    if (rows < 1 || cols < 1) {
        throw std::invalid_argument("RoadNetwork: grid must be at least 1x1");
    }
    if (lane_length <= 0.0) {
        throw std::invalid_argument("RoadNetwork: lane_length must be positive");
    }

    const double h_len = (cols_ + 1) * lane_length_;
    const double v_len = (rows_ + 1) * lane_length_;

    int id = 0;
    for (int r = 0; r < rows_; ++r) {
        for (int dir : {+1, -1}) {
            lanes_.push_back({id++, Axis::Horizontal, dir, r, h_len});
        }
    }
    for (int c = 0; c < cols_; ++c) {
        for (int dir : {+1, -1}) {
            lanes_.push_back({id++, Axis::Vertical, dir, c, v_len});
        }
    }

    for (int r = 0; r < rows_; ++r) {
        for (int c = 0; c < cols_; ++c) {
            centers_.push_back({(c + 1) * lane_length_, (r + 1) * lane_length_});
        }
    }

    conflicts_on_lane_.resize(lanes_.size());
    int cp_id = 0;
    for (const Lane& h : lanes_) {
        if (h.axis != Axis::Horizontal) continue;
        for (const Lane& v : lanes_) {
            if (v.axis != Axis::Vertical) continue;
            const int r = h.road_index;
            const int c = v.road_index;
            const double x = (c + 1) * lane_length_;
            const double y = (r + 1) * lane_length_;
            const double pos_on_h = (h.direction > 0) ? x : h.length - x;
            const double pos_on_v = (v.direction > 0) ? y : v.length - y;
            conflicts_.push_back({cp_id, h.id, v.id, pos_on_h, pos_on_v, r, c});
            conflicts_on_lane_[static_cast<size_t>(h.id)].push_back(cp_id);
            conflicts_on_lane_[static_cast<size_t>(v.id)].push_back(cp_id);
            ++cp_id;
        }
    }
    for (size_t l = 0; l < lanes_.size(); ++l) {
        auto& ids = conflicts_on_lane_[l];
        std::sort(ids.begin(), ids.end(), [&](int a, int b) {
            return conflict_pos_on(conflicts_[static_cast<size_t>(a)], static_cast<int>(l)) <
                   conflict_pos_on(conflicts_[static_cast<size_t>(b)], static_cast<int>(l));
        });
    }
}

const std::vector<int>& RoadNetwork::conflicts_on(int lane) const {
    return conflicts_on_lane_.at(static_cast<size_t>(lane));
}

std::vector<int> RoadNetwork::conflicts_between(int lane_a, int lane_b) const {
    std::vector<int> out;
    for (int id : conflicts_on(lane_a)) {
        const ConflictPoint& cp = conflicts_[static_cast<size_t>(id)];
        if ((cp.lane_a == lane_a && cp.lane_b == lane_b) ||
            (cp.lane_a == lane_b && cp.lane_b == lane_a)) {
            out.push_back(id);
        }
    }
    return out;
}

double RoadNetwork::conflict_pos_on(const ConflictPoint& cp, int lane) const {
    if (cp.lane_a == lane) return cp.pos_on_a;
    if (cp.lane_b == lane) return cp.pos_on_b;
    throw std::invalid_argument("conflict_pos_on: lane not part of conflict");
}

double RoadNetwork::center_pos_on_lane(int row, int col, int lane_id) const {
    const Lane& l = lane(lane_id);
    if (l.axis == Axis::Horizontal) {
        if (l.road_index != row) return -1.0;
        const double x = (col + 1) * lane_length_;
        return (l.direction > 0) ? x : l.length - x;
    }
    if (l.road_index != col) return -1.0;
    const double y = (row + 1) * lane_length_;
    return (l.direction > 0) ? y : l.length - y;
}

std::array<double, 2> RoadNetwork::world_pos(int lane_id, double s) const {
    const Lane& l = lane(lane_id);
    const double along = (l.direction > 0) ? s : l.length - s;
    if (l.axis == Axis::Horizontal) {
        return {along, (l.road_index + 1) * lane_length_};
    }
    return {(l.road_index + 1) * lane_length_, along};
}

}  // namespace crossflow
