#pragma once

#include <functional>
#include <vector>

#include "crossflow/episode.hpp"

namespace crossflow {

using EpisodeCallback = std::function<void(const EpisodeRecord&)>;

/// Stage one: trains the intersection-level agent in place by running
/// `scenario.episodes` episodes in rules+edge mode with decaying learning
/// rates and exploration noise. Returns per-episode records.
std::vector<EpisodeRecord> train_edge_agent(DdpgAgent& edge, const ScenarioConfig& scenario,
                                            const EpisodeCallback& on_episode = {});

/// Stage two: trains the network-level agent in place with the edge agent
/// frozen, running rules+edge+cloud episodes.
std::vector<EpisodeRecord> train_cloud_agent(DdpgAgent& cloud, DdpgAgent& edge,
                                             const ScenarioConfig& scenario,
                                             const EpisodeCallback& on_episode = {});

}  // namespace crossflow
