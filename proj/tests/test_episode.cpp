#include <doctest.h>

#include <cmath>
#include <stdexcept>

#include "crossflow/checkpoint.hpp"
#include "crossflow/episode.hpp"
#include "crossflow/training.hpp"

using namespace crossflow;

namespace {

ScenarioConfig small_scenario() {
    ScenarioConfig sc;
    sc.rows = 1;
    sc.cols = 1;
    sc.density = 900.0;
    sc.seed = 3;
    sc.steps = 300;
    sc.mode = Mode::Rules;
    return sc;
}

}  // namespace

TEST_CASE("graph reward conventions") {
    WorldConfig wc;
    wc.spawn_rate_per_hour = 0.0;
    World world(wc);

    SUBCASE("empty graph scores zero") {
        CHECK(graph_reward({}, world, {}, {}) == 0.0);
    }
    SUBCASE("retired vehicles count as full speed") {
        const std::vector<std::int64_t> ids = {1, 2};
        const std::vector<std::int64_t> retired = {1, 2};
        CHECK(graph_reward(ids, world, retired, {}) == 1.0);
    }
    SUBCASE("collided vehicles count as zero") {
        const std::vector<std::int64_t> ids = {1, 2};
        const std::vector<std::int64_t> retired = {1};
        const std::vector<std::int64_t> collided = {2};
        CHECK(graph_reward(ids, world, retired, collided) == 0.5);
    }
    SUBCASE("live vehicles score velocity over v_max") {
        WorldConfig fast;
        fast.spawn_rate_per_hour = 36000.0;
        World w2(fast);
        w2.advance({});
        REQUIRE(!w2.vehicles().empty());
        const Vehicle& v = w2.vehicles().front();
        const std::vector<std::int64_t> ids = {v.id};
        CHECK(graph_reward(ids, w2, {}, {}) == doctest::Approx(v.vel / 13.0).epsilon(1e-12));
    }
}

TEST_CASE("heat map rasterization") {
    WorldConfig wc;
    wc.spawn_rate_per_hour = 36000.0;
    World w(wc);
    for (int i = 0; i < 50; ++i) w.advance({});
    REQUIRE(!w.vehicles().empty());
    const HeatMap h = rasterize(w.network(), w.vehicles(), 5.0);
    CHECK(h.nx == 60);  // 300 m extent at 5 m cells
    CHECK(h.ny == 60);
    int total = 0;
    for (int c : h.counts) total += c;
    CHECK(total == static_cast<int>(w.vehicles().size()));
    for (int iy = 0; iy < h.ny; ++iy) {
        for (int ix = 0; ix < h.nx; ++ix) {
            if (h.at(ix, iy) == 0) {
                CHECK(h.vel_at(ix, iy) == 0.0);
            } else {
                CHECK(h.vel_at(ix, iy) >= 6.0);
                CHECK(h.vel_at(ix, iy) <= 13.0);
            }
        }
    }
}

TEST_CASE("mode E episode runs without networks and records everything") {
    EpisodeOptions opt;
    opt.scenario = small_scenario();
    const EpisodeRecord rec = run_episode(opt);
    CHECK(rec.steps == 300);
    CHECK(static_cast<int>(rec.step_mean_velocity.size()) == 300);
    CHECK(rec.spawned > 0);
    CHECK(rec.collided == 0);
    CHECK(rec.mean_velocity > 0.0);
    CHECK(rec.mean_velocity <= 13.0);
    for (double v : rec.step_mean_velocity) {
        if (!std::isnan(v)) {
            CHECK(v >= 6.0);
            CHECK(v <= 13.0);
        }
    }
    CHECK(rec.peak_population > 0);
    CHECK(rec.heat_final.nx > 0);
    CHECK(rec.heat_peak.nx > 0);
}

TEST_CASE("identical config and seed reproduce identical records") {
    EpisodeOptions opt;
    opt.scenario = small_scenario();
    const EpisodeRecord a = run_episode(opt);
    const EpisodeRecord b = run_episode(opt);
    CHECK(a.spawned == b.spawned);
    CHECK(a.retired == b.retired);
    CHECK(a.collided == b.collided);
    CHECK(a.mean_velocity == b.mean_velocity);
    CHECK(a.mean_reward == b.mean_reward);
    REQUIRE(a.step_mean_velocity.size() == b.step_mean_velocity.size());
    for (size_t i = 0; i < a.step_mean_velocity.size(); ++i) {
        const double x = a.step_mean_velocity[i], y = b.step_mean_velocity[i];
        CHECK(((std::isnan(x) && std::isnan(y)) || x == y));
    }
    CHECK(a.heat_final.counts == b.heat_final.counts);
    CHECK(a.heat_peak.counts == b.heat_peak.counts);
}

TEST_CASE("different seeds diverge") {
    EpisodeOptions opt;
    opt.scenario = small_scenario();
    const EpisodeRecord a = run_episode(opt);
    opt.scenario.seed = 4;
    const EpisodeRecord b = run_episode(opt);
    CHECK(a.mean_velocity != b.mean_velocity);
}

TEST_CASE("networked modes require their agents") {
    EpisodeOptions opt;
    opt.scenario = small_scenario();
    opt.scenario.mode = Mode::RulesEdge;
    CHECK_THROWS_AS(run_episode(opt), std::invalid_argument);
    opt.scenario.mode = Mode::RulesEdgeCloud;
    CHECK_THROWS_AS(run_episode(opt), std::invalid_argument);
}

TEST_CASE("mode EE episode with an untrained agent stays safe and deterministic") {
    Hyperparams hp;
    DdpgAgent edge(Tier::Edge, hp, 12);
    EpisodeOptions opt;
    opt.scenario = small_scenario();
    opt.scenario.mode = Mode::RulesEdge;
    opt.edge = &edge;
    const EpisodeRecord a = run_episode(opt);
    CHECK(a.collided == 0);
    const EpisodeRecord b = run_episode(opt);
    CHECK(a.mean_velocity == b.mean_velocity);
}

TEST_CASE("training runs update the agent and record losses") {
    Hyperparams hp;
    DdpgAgent edge(Tier::Edge, hp, 13);
    EpisodeOptions opt;
    opt.scenario = small_scenario();
    opt.scenario.mode = Mode::RulesEdge;
    opt.scenario.density = 2100.0;  // enough traffic to fill the buffer fast
    opt.edge = &edge;
    opt.train_edge = true;
    opt.noise_sigma = 0.2;
    opt.lr_actor = 1e-4;
    opt.lr_critic = 1e-3;
    const auto before = edge.actor().params();
    const EpisodeRecord rec = run_episode(opt);
    CHECK(!rec.critic_losses.empty());
    CHECK(rec.critic_losses.size() == rec.actor_qs.size());
    CHECK(edge.actor().params() != before);
    for (double l : rec.critic_losses) CHECK(std::isfinite(l));
}

TEST_CASE("stage two freezes the edge parameters") {
    Hyperparams edge_hp;
    DdpgAgent edge(Tier::Edge, edge_hp, 14);
    Hyperparams cloud_hp;
    cloud_hp.replay_capacity = 2000;
    cloud_hp.train_every = 50;  // a few updates only: this is a contract test
    DdpgAgent cloud(Tier::Cloud, cloud_hp, 15);

    ScenarioConfig sc = small_scenario();
    sc.episodes = 1;
    sc.steps = 150;
    const auto edge_before = snapshot_agent(edge);
    train_cloud_agent(cloud, edge, sc);
    const auto edge_after = snapshot_agent(edge);
    REQUIRE(edge_before.size() == edge_after.size());
    for (const auto& [name, seg] : edge_before) {
        CHECK(edge_after.at(name).data == seg.data);
    }
}
