#pragma once

#include <cstdint>
#include <vector>

#include "crossflow/config.hpp"
#include "crossflow/coordinators.hpp"
#include "crossflow/ddpg.hpp"
#include "crossflow/end_controller.hpp"
#include "crossflow/world.hpp"

namespace crossflow {

/// Occupancy and mean-velocity snapshot on a square-cell raster over the
/// world extent. Velocity cells without vehicles hold 0.
struct HeatMap {
    int nx = 0, ny = 0;
    double cell = 5.0;
    std::vector<int> counts;      // row-major, ny rows of nx
    std::vector<double> mean_vel;
    int& at(int ix, int iy) { return counts[static_cast<size_t>(iy) * nx + ix]; }
    int at(int ix, int iy) const { return counts[static_cast<size_t>(iy) * nx + ix]; }
    double vel_at(int ix, int iy) const { return mean_vel[static_cast<size_t>(iy) * nx + ix]; }
};

HeatMap rasterize(const RoadNetwork& net, std::span<const Vehicle> vehicles, double cell = 5.0);

struct EpisodeRecord {
    int episode = 0;
    std::uint64_t seed = 0;
    Mode mode = Mode::Rules;
    int steps = 0;
    std::int64_t spawned = 0;
    std::int64_t retired = 0;
    std::int64_t collided = 0;
    double mean_velocity = 0.0;     // population mean speed, time-averaged (m/s)
    double mean_reward = 0.0;       // graph reward, averaged over graphs and steps
    double mean_travel_time = 0.0;  // seconds, over vehicles retired this episode
    double critic_loss = 0.0;       // mean minibatch loss (training runs)
    double actor_q = 0.0;           // mean minibatch Q objective (training runs)
    int peak_population = 0;
    int peak_step = 0;
    std::vector<double> step_mean_velocity;  // length = steps, NaN when empty
    std::vector<double> critic_losses;       // one per optimizer step
    std::vector<double> actor_qs;
    std::vector<CollisionEvent> collisions;
    HeatMap heat_final;
    HeatMap heat_peak;
};

struct EpisodeOptions {
    ScenarioConfig scenario;
    int episode_index = 0;
    DdpgAgent* edge = nullptr;   // required in modes EE and EEC
    DdpgAgent* cloud = nullptr;  // required in mode EEC
    bool train_edge = false;
    bool train_cloud = false;
    double noise_sigma = 0.0;    // exploration noise while training
    double lr_actor = 0.0;
    double lr_critic = 0.0;
    SvParams sv_params;
    FusionParams fusion;
};

/// Per-graph reward: mean over the graph's decision vehicles of their
/// post-step velocity / v_max; vehicles that completed their lane count as
/// full speed, collided vehicles as zero.
double graph_reward(std::span<const std::int64_t> ids, const World& world,
                    std::span<const std::int64_t> retired, std::span<const std::int64_t> collided,
                    double v_max = 13.0);

/// Runs one full episode of the configured scenario and returns its
/// metrics. When training flags are set the corresponding agent is updated
/// in place from transitions gathered during the run.
EpisodeRecord run_episode(const EpisodeOptions& opt);

}  // namespace crossflow
