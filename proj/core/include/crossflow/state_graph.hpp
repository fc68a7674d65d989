#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "crossflow/virtual_lane.hpp"

namespace crossflow {

/// Square 3-channel observation tensor. Column j belongs to decision
/// vehicle j (row 0 = its own kinetics, rows 1.. = reference vehicles
/// nearest-first); absent vehicles are zero padding. Stored
/// channel-major (channel, row, col) for the convolution stack.
struct StateGraph {
    static constexpr int kChannels = 3;  // position offset, velocity, acceleration

    int width = 0;
    std::vector<double> values;               // kChannels * width * width
    std::vector<std::int64_t> column_vehicles;  // length <= width

    explicit StateGraph(int w = 0)
        : width(w), values(static_cast<size_t>(kChannels) * w * w, 0.0) {}

    double& at(int row, int col, int ch) {
        return values[(static_cast<size_t>(ch) * width + row) * width + col];
    }
    double at(int row, int col, int ch) const {
        return values[(static_cast<size_t>(ch) * width + row) * width + col];
    }
};

struct ScoredVehicle {
    std::int64_t id = -1;
    double score = 0.0;          // SV (edge) or DI (cloud)
    double conflict_dist = 0.0;  // distance to nearest conflict point, tie-break
};

/// Up to `width` ids by ascending score (edge nodes pick the lowest safety
/// values). Ties break by smaller conflict distance, then id.
std::vector<std::int64_t> select_decision_vehicles_edge(std::vector<ScoredVehicle> scored,
                                                        int width);

/// Up to `width` ids by descending score (the cloud picks the highest
/// density indicators). Same deterministic tie-break.
std::vector<std::int64_t> select_decision_vehicles_cloud(std::vector<ScoredVehicle> scored,
                                                         int width);

struct DecisionContext {
    std::int64_t id = -1;
    const VirtualLane* vlane = nullptr;
};

/// Assembles the state graph: per column the decision vehicle plus its
/// width-1 nearest virtual-lane neighbors. Channels are normalized to
/// [-1, 1]: signed projected offset / base lane length (clamped),
/// velocity / v_max, acceleration / a_max.
StateGraph build_state_graph(std::span<const DecisionContext> decisions, int width,
                             double v_max = 13.0, double a_max = 3.0);

}  // namespace crossflow
