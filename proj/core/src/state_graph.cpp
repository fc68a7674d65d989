#include "crossflow/state_graph.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace crossflow {

namespace {

std::vector<std::int64_t> select_sorted(std::vector<ScoredVehicle> scored, int width,
                                        bool descending) {
    std::sort(scored.begin(), scored.end(), [&](const ScoredVehicle& a, const ScoredVehicle& b) {
        if (a.score != b.score) return descending ? a.score > b.score : a.score < b.score;
        if (a.conflict_dist != b.conflict_dist) return a.conflict_dist < b.conflict_dist;
        return a.id < b.id;
    });
    if (static_cast<int>(scored.size()) > width) scored.resize(static_cast<size_t>(width));
    std::vector<std::int64_t> ids;
    ids.reserve(scored.size());
    for (const ScoredVehicle& s : scored) ids.push_back(s.id);
    return ids;
}

}  // namespace

std::vector<std::int64_t> select_decision_vehicles_edge(std::vector<ScoredVehicle> scored,
                                                        int width) {
    return select_sorted(std::move(scored), width, false);
}

std::vector<std::int64_t> select_decision_vehicles_cloud(std::vector<ScoredVehicle> scored,
                                                         int width) {
    return select_sorted(std::move(scored), width, true);
}

StateGraph build_state_graph(std::span<const DecisionContext> decisions, int width,
                             double v_max, double a_max) {
    if (static_cast<int>(decisions.size()) > width) {
        throw std::invalid_argument("build_state_graph: more decision vehicles than columns");
    }
    StateGraph sg(width);
    for (size_t col = 0; col < decisions.size(); ++col) {
        const DecisionContext& dc = decisions[col];
        if (dc.vlane == nullptr) {
            throw std::invalid_argument("build_state_graph: decision vehicle on no virtual lane");
        }
        const int self = dc.vlane->index_of(dc.id);
        if (self < 0) {
            throw std::invalid_argument("build_state_graph: decision vehicle absent from its lane");
        }
        const VirtualLaneEntry& ego = dc.vlane->entries[static_cast<size_t>(self)];
        const int c = static_cast<int>(col);
        sg.at(0, c, 0) = 0.0;  // self offset
        sg.at(0, c, 1) = ego.vel / v_max;
        sg.at(0, c, 2) = ego.acc / a_max;

        const auto nbs = nearest_neighbors(*dc.vlane, dc.id, width - 1);
        for (size_t r = 0; r < nbs.size(); ++r) {
            const VirtualLaneEntry& e =
                dc.vlane->entries[static_cast<size_t>(nbs[r].entry_index)];
            sg.at(static_cast<int>(r) + 1, c, 0) =
                std::clamp(nbs[r].gap / dc.vlane->base_length, -1.0, 1.0);
            sg.at(static_cast<int>(r) + 1, c, 1) = e.vel / v_max;
            sg.at(static_cast<int>(r) + 1, c, 2) = e.acc / a_max;
        }
        sg.column_vehicles.push_back(dc.id);
    }
    return sg;
}

}  // namespace crossflow
