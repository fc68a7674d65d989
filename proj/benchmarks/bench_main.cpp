#include <benchmark/benchmark.h>

#include <random>
#include <unordered_map>
#include <vector>

#include "crossflow/coordinators.hpp"
#include "crossflow/ddpg.hpp"
#include "crossflow/episode.hpp"
#include "crossflow/world.hpp"

using namespace crossflow;

namespace {

std::vector<Vehicle> population(const RoadNetwork& net, int n, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::uniform_int_distribution<int> lane_pick(0, static_cast<int>(net.lanes().size()) - 1);
    std::uniform_real_distribution<double> vel(6.0, 13.0);
    std::vector<Vehicle> vs;
    for (int i = 0; i < n; ++i) {
        const int l = lane_pick(rng);
        std::uniform_real_distribution<double> pos(0.0, net.lane(l).length);
        vs.push_back({i, l, pos(rng), vel(rng), 0.0});
    }
    return vs;
}

void bm_world_step(benchmark::State& state) {
    WorldConfig cfg;
    cfg.rows = 3;
    cfg.cols = 3;
    cfg.spawn_rate_per_hour = state.range(0);
    World world(cfg);
    for (int i = 0; i < 200; ++i) world.advance({});
    std::unordered_map<std::int64_t, double> actions;
    for (auto _ : state) {
        actions.clear();
        for (const Vehicle& v : world.vehicles()) actions[v.id] = 0.0;
        benchmark::DoNotOptimize(world.advance(actions));
    }
    state.counters["vehicles"] = static_cast<double>(world.vehicles().size());
}

void bm_virtual_lanes(benchmark::State& state) {
    RoadNetwork net(3, 3);
    const auto vs = population(net, static_cast<int>(state.range(0)), 1);
    for (auto _ : state) {
        benchmark::DoNotOptimize(build_virtual_lanes(net, vs));
    }
}

void bm_assessment(benchmark::State& state) {
    RoadNetwork net(3, 3);
    const auto vs = population(net, static_cast<int>(state.range(0)), 2);
    const VirtualLaneSet set = build_virtual_lanes(net, vs);
    for (auto _ : state) {
        benchmark::DoNotOptimize(assess_vehicles(net, set, vs));
    }
}

void bm_actor_forward(benchmark::State& state) {
    const Tier tier = state.range(0) == 0 ? Tier::Edge : Tier::Cloud;
    Net net(tier, Role::Actor, 7);
    std::vector<double> input(3u * net.state_width() * net.state_width(), 0.3);
    Net::Workspace ws;
    for (auto _ : state) {
        net.forward(input.data(), nullptr, ws);
        benchmark::DoNotOptimize(ws.output());
    }
}

void bm_critic_update(benchmark::State& state) {
    Hyperparams hp;
    DdpgAgent agent(Tier::Edge, hp, 9);
    std::mt19937_64 rng(3);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    StateGraph sg(15);
    for (double& v : sg.values) v = u(rng);
    std::vector<double> action(15, 0.5);
    for (int i = 0; i < hp.minibatch; ++i) agent.record_transition(sg, action, 0.5, sg);
    for (auto _ : state) {
        benchmark::DoNotOptimize(agent.critic_update(1e-4));
    }
}

BENCHMARK(bm_world_step)->Arg(300)->Arg(2100);
BENCHMARK(bm_virtual_lanes)->Arg(50)->Arg(200);
BENCHMARK(bm_assessment)->Arg(50)->Arg(200);
BENCHMARK(bm_actor_forward)->Arg(0)->Arg(1);
BENCHMARK(bm_critic_update);

}  // namespace

BENCHMARK_MAIN();
