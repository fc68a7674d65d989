#include "crossflow/episode.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <stdexcept>
#include <unordered_map>
#include <unordered_set>

#include "crossflow/signal_baseline.hpp"

namespace crossflow {

HeatMap rasterize(const RoadNetwork& net, std::span<const Vehicle> vehicles, double cell) {
    HeatMap h;
    h.cell = cell;
    h.nx = static_cast<int>(std::ceil(net.extent_x() / cell));
    h.ny = static_cast<int>(std::ceil(net.extent_y() / cell));
    h.counts.assign(static_cast<size_t>(h.nx) * h.ny, 0);
    h.mean_vel.assign(static_cast<size_t>(h.nx) * h.ny, 0.0);
    for (const Vehicle& v : vehicles) {
        const auto [x, y] = net.world_pos(v.lane, v.pos);
        const int ix = std::clamp(static_cast<int>(x / cell), 0, h.nx - 1);
        const int iy = std::clamp(static_cast<int>(y / cell), 0, h.ny - 1);
        ++h.at(ix, iy);
        h.mean_vel[static_cast<size_t>(iy) * h.nx + ix] += v.vel;
    }
    for (size_t i = 0; i < h.counts.size(); ++i) {
        if (h.counts[i] > 0) h.mean_vel[i] /= h.counts[i];
    }
    return h;
}

double graph_reward(std::span<const std::int64_t> ids, const World& world,
                    std::span<const std::int64_t> retired, std::span<const std::int64_t> collided,
                    double v_max) {
    if (ids.empty()) return 0.0;
    double sum = 0.0;
    for (std::int64_t id : ids) {
        if (std::find(collided.begin(), collided.end(), id) != collided.end()) {
            continue;  // counts as zero
        }
        if (std::find(retired.begin(), retired.end(), id) != retired.end()) {
            sum += 1.0;
            continue;
        }
        const Vehicle* v = world.find(id);
        if (v != nullptr) sum += v->vel / v_max;
    }
    return sum / static_cast<double>(ids.size());
}

namespace {

// vehicle size (2 m collision threshold) plus discretization headroom
constexpr double kSafeMargin = 3.5;

struct PendingGraph {
    StateGraph graph{0};
    std::vector<double> actions;
    std::vector<std::int64_t> ids;
    double reward = 0.0;
    bool has_reward = false;
};

std::vector<double> tier_actions(DdpgAgent& agent, const StateGraph& sg, bool train,
                                 double sigma) {
    return train ? agent.select_action(sg, sigma) : agent.actor_forward(sg);
}

/// Largest acceleration that keeps the vehicle able to brake behind its
/// virtual-lane leader with a clear margin. Both parties brake at a_min
/// until the velocity floor, so the gap shrinks by at most
/// (v^2 - v_front^2) / (2 |a_min|); solve that for the commanded velocity.
double safe_accel_cap(const Vehicle& ego, double front_gap, double front_vel,
                      const MotionLimits& lim, double dt, double margin) {
    if (!std::isfinite(front_gap)) return lim.a_max;
    const double brake = -lim.a_min;
    const double v2 = front_vel * front_vel + 2.0 * brake * (front_gap - margin);
    const double floor2 = lim.v_min * lim.v_min;
    const double v_allowed = v2 <= floor2 ? lim.v_min : std::sqrt(v2);
    return std::clamp((v_allowed - ego.vel) / dt, lim.a_min, lim.a_max);
}

}  // namespace

EpisodeRecord run_episode(const EpisodeOptions& opt) {
    const ScenarioConfig& sc = opt.scenario;
    if ((sc.mode == Mode::RulesEdge || sc.mode == Mode::RulesEdgeCloud) && opt.edge == nullptr) {
        throw std::invalid_argument("run_episode: mode requires an edge agent");
    }
    if (sc.mode == Mode::RulesEdgeCloud && opt.cloud == nullptr) {
        throw std::invalid_argument("run_episode: mode EEC requires a cloud agent");
    }

    WorldConfig wc;
    wc.rows = sc.rows;
    wc.cols = sc.cols;
    wc.dt = sc.dt;
    wc.spawn_rate_per_hour = sc.density;
    wc.seed = sc.seed + static_cast<std::uint64_t>(opt.episode_index) * 0x51ED270B9ULL;
    if (sc.mode == Mode::Signal) {
        wc.limits.v_min = 0.0;  // signals need standing vehicles
        // a newcomer at 10 m/s needs ~17 m plus control latency to stop behind a standing queue
        wc.min_spawn_gap = 25.0;
    }
    World world(wc);

    EpisodeRecord rec;
    rec.episode = opt.episode_index;
    rec.seed = sc.seed;
    rec.mode = sc.mode;
    rec.steps = sc.steps;

    const bool use_edge = sc.mode == Mode::RulesEdge || sc.mode == Mode::RulesEdgeCloud;
    const bool use_cloud = sc.mode == Mode::RulesEdgeCloud;
    const int edge_width = use_edge ? opt.edge->actor().state_width() : 0;
    const int cloud_width = use_cloud ? opt.cloud->actor().state_width() : 0;

    std::map<std::pair<int, int>, PendingGraph> pending_edge;
    PendingGraph pending_cloud;
    bool have_pending_cloud = false;

    std::unordered_map<std::int64_t, std::int64_t> spawn_step;
    double vel_accum = 0.0;
    int vel_steps = 0;
    double reward_accum = 0.0;
    int reward_steps = 0;
    double critic_accum = 0.0, actor_accum = 0.0;
    int update_count = 0;
    double travel_accum = 0.0;
    std::int64_t travel_count = 0;

    for (int step = 0; step < sc.steps; ++step) {
        const std::vector<Vehicle> snapshot = world.vehicles();
        std::unordered_map<std::int64_t, double> actions;

        std::vector<TierDecision> edges;
        TierDecision cloud;
        std::unordered_map<std::int64_t, double> edge_act, cloud_act;

        if (sc.mode == Mode::Signal) {
            const auto cmd = signal_actions(world.network(), snapshot,
                                            static_cast<double>(step) * sc.dt, {}, wc.limits);
            actions.insert(cmd.begin(), cmd.end());
        } else if (!snapshot.empty()) {
            const VirtualLaneSet vlanes = build_virtual_lanes(world.network(), snapshot);
            const auto assessments =
                assess_vehicles(world.network(), vlanes, snapshot, opt.sv_params);

            if (use_edge) {
                edges = edge_decisions(world.network(), vlanes, assessments, edge_width);
                for (TierDecision& d : edges) {
                    const auto a =
                        tier_actions(*opt.edge, d.graph, opt.train_edge, opt.noise_sigma);
                    for (size_t i = 0; i < d.ids.size(); ++i) edge_act[d.ids[i]] = a[i];
                    // complete last step's transition for this intersection
                    if (opt.train_edge) {
                        auto it = pending_edge.find({d.edge_row, d.edge_col});
                        if (it != pending_edge.end() && it->second.has_reward) {
                            opt.edge->record_transition(it->second.graph, it->second.actions,
                                                        it->second.reward, d.graph);
                        }
                        PendingGraph pg;
                        pg.graph = d.graph;
                        pg.actions = a;
                        pg.ids = d.ids;
                        pending_edge[{d.edge_row, d.edge_col}] = std::move(pg);
                    }
                }
            }
            if (use_cloud) {
                cloud = cloud_decision(vlanes, assessments, cloud_width);
                if (!cloud.ids.empty()) {
                    const auto a =
                        tier_actions(*opt.cloud, cloud.graph, opt.train_cloud, opt.noise_sigma);
                    for (size_t i = 0; i < cloud.ids.size(); ++i) cloud_act[cloud.ids[i]] = a[i];
                    if (opt.train_cloud && have_pending_cloud && pending_cloud.has_reward) {
                        opt.cloud->record_transition(pending_cloud.graph, pending_cloud.actions,
                                                     pending_cloud.reward, cloud.graph);
                    }
                    if (opt.train_cloud) {
                        pending_cloud.graph = cloud.graph;
                        pending_cloud.actions = a;
                        pending_cloud.ids = cloud.ids;
                        pending_cloud.has_reward = false;
                        have_pending_cloud = true;
                    }
                }
            }

            for (size_t vi = 0; vi < assessments.size(); ++vi) {
                const VehicleAssessment& va = assessments[vi];
                std::optional<double> ea, ca;
                if (auto it = edge_act.find(va.id); it != edge_act.end()) ea = it->second;
                if (auto it = cloud_act.find(va.id); it != cloud_act.end()) ca = it->second;
                // Swapped gap order: the magnitude branch must fire for the
                // vehicle whose dominant threat presses from behind on the
                // virtual lane, so it escapes forward while the blocked one
                // yields.
                double a = resolve(va.sv, va.rear_gap, va.front_gap, ea, ca, opt.fusion);
                // Hard braking governor: never command more than the
                // collision-avoidance envelope toward the leader allows.
                a = std::min(a, safe_accel_cap(snapshot[vi], va.front_gap, va.front_vel,
                                               wc.limits, sc.dt, kSafeMargin));
                actions[va.id] = a;
            }
        }

        const StepEvents ev = world.advance(actions);

        for (std::int64_t id : ev.spawned) spawn_step[id] = world.step_index();
        for (std::int64_t id : ev.retired) {
            if (auto it = spawn_step.find(id); it != spawn_step.end()) {
                travel_accum += static_cast<double>(world.step_index() - it->second) * sc.dt;
                ++travel_count;
                spawn_step.erase(it);
            }
        }
        for (const CollisionEvent& c : ev.collisions) rec.collisions.push_back(c);

        // per-graph rewards from post-step velocities
        std::vector<std::int64_t> collided_ids;
        for (const CollisionEvent& c : ev.collisions) {
            collided_ids.push_back(c.vehicle_a);
            collided_ids.push_back(c.vehicle_b);
        }
        if (opt.train_edge) {
            for (const TierDecision& d : edges) {
                auto it = pending_edge.find({d.edge_row, d.edge_col});
                if (it != pending_edge.end()) {
                    it->second.reward =
                        graph_reward(it->second.ids, world, ev.retired, collided_ids);
                    it->second.has_reward = true;
                }
            }
        }
        if (opt.train_cloud && have_pending_cloud) {
            pending_cloud.reward = graph_reward(pending_cloud.ids, world, ev.retired, collided_ids);
            pending_cloud.has_reward = true;
        }
        for (const TierDecision& d : edges) {
            reward_accum += graph_reward(d.ids, world, ev.retired, collided_ids);
            ++reward_steps;
        }
        if (use_cloud && !cloud.ids.empty()) {
            reward_accum += graph_reward(cloud.ids, world, ev.retired, collided_ids);
            ++reward_steps;
        }

        if (!world.vehicles().empty()) {
            double s = 0.0;
            for (const Vehicle& v : world.vehicles()) s += v.vel;
            const double mean = s / static_cast<double>(world.vehicles().size());
            rec.step_mean_velocity.push_back(mean);
            vel_accum += mean;
            ++vel_steps;
        } else {
            rec.step_mean_velocity.push_back(std::numeric_limits<double>::quiet_NaN());
        }

        const int pop = static_cast<int>(world.vehicles().size());
        if (pop > rec.peak_population) {
            rec.peak_population = pop;
            rec.peak_step = step;
            rec.heat_peak = rasterize(world.network(), world.vehicles());
        }

        // optimizer steps
        auto maybe_update = [&](DdpgAgent* agent, bool enabled) {
            if (!enabled || agent == nullptr || !agent->can_update()) return;
            if (agent->hyperparams().train_every > 1 &&
                step % agent->hyperparams().train_every != 0) {
                return;
            }
            const double cl = agent->critic_update(opt.lr_critic);
            const double aq = agent->actor_update(opt.lr_actor);
            agent->target_sync();
            rec.critic_losses.push_back(cl);
            rec.actor_qs.push_back(aq);
            critic_accum += cl;
            actor_accum += aq;
            ++update_count;
        };
        maybe_update(opt.edge, opt.train_edge);
        maybe_update(opt.cloud, opt.train_cloud);
    }

    rec.spawned = world.spawned_total();
    rec.retired = world.retired_total();
    rec.collided = world.collided_total();
    rec.mean_velocity = vel_steps > 0 ? vel_accum / vel_steps : 0.0;
    rec.mean_reward = reward_steps > 0 ? reward_accum / reward_steps
                                       : rec.mean_velocity / wc.limits.v_max;
    rec.mean_travel_time = travel_count > 0 ? travel_accum / static_cast<double>(travel_count) : 0.0;
    rec.critic_loss = update_count > 0 ? critic_accum / update_count : 0.0;
    rec.actor_q = update_count > 0 ? actor_accum / update_count : 0.0;
    rec.heat_final = rasterize(world.network(), world.vehicles());
    if (rec.peak_population == 0) rec.heat_peak = rec.heat_final;
    return rec;
}

}  // namespace crossflow
