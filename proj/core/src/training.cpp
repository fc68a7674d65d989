#include "crossflow/training.hpp"

namespace crossflow {

namespace {

std::vector<EpisodeRecord> run_stage(const ScenarioConfig& scenario, DdpgAgent* edge,
                                     DdpgAgent* cloud, DdpgAgent& trainee, bool train_edge,
                                     bool train_cloud, const EpisodeCallback& on_episode) {
    trainee.hyperparams().episodes = scenario.episodes;  // drives the decay schedules
    const Hyperparams& hp = trainee.hyperparams();
    std::vector<EpisodeRecord> records;
    records.reserve(static_cast<size_t>(scenario.episodes));
    for (int ep = 0; ep < scenario.episodes; ++ep) {
        EpisodeOptions opt;
        opt.scenario = scenario;
        opt.episode_index = ep;
        opt.edge = edge;
        opt.cloud = cloud;
        opt.train_edge = train_edge;
        opt.train_cloud = train_cloud;
        opt.noise_sigma = hp.noise_sigma(ep);
        opt.lr_actor = hp.lr_actor(ep);
        opt.lr_critic = hp.lr_critic(ep);
        records.push_back(run_episode(opt));
        if (on_episode) on_episode(records.back());
    }
    return records;
}

}  // namespace

std::vector<EpisodeRecord> train_edge_agent(DdpgAgent& edge, const ScenarioConfig& scenario,
                                            const EpisodeCallback& on_episode) {
    ScenarioConfig sc = scenario;
    sc.mode = Mode::RulesEdge;
    return run_stage(sc, &edge, nullptr, edge, true, false, on_episode);
}

std::vector<EpisodeRecord> train_cloud_agent(DdpgAgent& cloud, DdpgAgent& edge,
                                             const ScenarioConfig& scenario,
                                             const EpisodeCallback& on_episode) {
    ScenarioConfig sc = scenario;
    sc.mode = Mode::RulesEdgeCloud;
    return run_stage(sc, &edge, &cloud, cloud, false, true, on_episode);
}

}  // namespace crossflow
