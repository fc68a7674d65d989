// Command line front end for the traffic coordination stack.
//
// Exit codes: 0 success, 2 configuration error, 3 training divergence,
// 4 collision found while --fail-on-collision is set, 5 I/O failure.

#include <cmath>
#include <cstdio>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "crossflow/checkpoint.hpp"
#include "crossflow/config.hpp"
#include "crossflow/episode.hpp"
#include "crossflow/exporter.hpp"
#include "crossflow/training.hpp"

namespace {

using namespace crossflow;

struct CliArgs {
    std::string grid;
    std::optional<double> density;
    std::optional<std::uint64_t> seed;
    std::optional<int> episodes;
    std::optional<int> steps;
    std::string mode;
    std::string checkpoint;
    std::string cloud_checkpoint;
    std::string out;
    std::string config_file;
};

void add_common_flags(CLI::App* cmd, CliArgs& a) {
    cmd->add_option("--grid", a.grid, "Intersection grid as ROWSxCOLS, e.g. 3x3");
    cmd->add_option("--density", a.density, "Arrival rate per lane, vehicles/hour");
    cmd->add_option("--seed", a.seed, "Base RNG seed");
    cmd->add_option("--episodes", a.episodes, "Number of episodes");
    cmd->add_option("--steps", a.steps, "Steps per episode (0.1 s each)");
    cmd->add_option("--checkpoint", a.checkpoint, "Intersection-agent weights file");
    cmd->add_option("--cloud-checkpoint", a.cloud_checkpoint, "Network-agent weights file");
    cmd->add_option("--out", a.out, "Output directory");
    cmd->add_option("--config", a.config_file, "key=value config file (CLI flags win)");
}

void parse_grid(const std::string& grid, ScenarioConfig& sc) {
    const auto x = grid.find('x');
    if (x == std::string::npos) throw std::invalid_argument("--grid expects ROWSxCOLS");
    sc.rows = std::stoi(grid.substr(0, x));
    sc.cols = std::stoi(grid.substr(x + 1));
}

ScenarioConfig merge(const CliArgs& a, const ScenarioConfig& defaults) {
    ScenarioConfig sc = defaults;
    if (!a.config_file.empty()) apply_config_file(sc, a.config_file);
    if (!a.grid.empty()) parse_grid(a.grid, sc);
    if (a.density) sc.density = *a.density;
    if (a.seed) sc.seed = *a.seed;
    if (a.episodes) sc.episodes = *a.episodes;
    if (a.steps) sc.steps = *a.steps;
    if (!a.mode.empty()) sc.mode = parse_mode(a.mode);
    if (!a.checkpoint.empty()) sc.checkpoint = a.checkpoint;
    if (!a.cloud_checkpoint.empty()) sc.cloud_checkpoint = a.cloud_checkpoint;
    if (!a.out.empty()) sc.out_dir = a.out;
    return sc;
}

void print_episode(const EpisodeRecord& r) {
    std::printf("episode %d: spawned %lld retired %lld collided %lld mean_v %.3f reward %.4f\n",
                r.episode, static_cast<long long>(r.spawned), static_cast<long long>(r.retired),
                static_cast<long long>(r.collided), r.mean_velocity, r.mean_reward);
    std::fflush(stdout);
}

int run_train_edge(const CliArgs& a) {
    ScenarioConfig defaults;
    defaults.rows = 1;
    defaults.cols = 1;
    defaults.density = 300.0;
    defaults.episodes = 50;
    defaults.steps = 600;
    ScenarioConfig sc = merge(a, defaults);
    sc.mode = Mode::RulesEdge;
    sc.checkpoint = "(training)";
    sc.validate();

    Hyperparams hp;
    DdpgAgent edge(Tier::Edge, hp, sc.seed);
    const auto records = train_edge_agent(edge, sc, print_episode);
    export_run(sc.out_dir, sc, records);
    save_agent(sc.out_dir + "/edge.ckpt", edge);
    std::printf("saved %s/edge.ckpt\n", sc.out_dir.c_str());
    return 0;
}

int run_train_cloud(const CliArgs& a) {
    ScenarioConfig defaults;
    defaults.rows = 3;
    defaults.cols = 3;
    defaults.density = 900.0;
    defaults.episodes = 50;
    defaults.steps = 600;
    ScenarioConfig sc = merge(a, defaults);
    sc.mode = Mode::RulesEdgeCloud;
    if (sc.checkpoint.empty()) throw std::invalid_argument("train-cloud requires --checkpoint");
    sc.cloud_checkpoint = "(training)";
    sc.validate();

    Hyperparams hp;
    DdpgAgent edge(Tier::Edge, hp, sc.seed);
    load_agent(sc.checkpoint, edge);
    Hyperparams cloud_hp;
    cloud_hp.replay_capacity = 5000;  // one graph per step at 576 floats
    cloud_hp.train_every = 8;
    DdpgAgent cloud(Tier::Cloud, cloud_hp, sc.seed + 1);
    const auto records = train_cloud_agent(cloud, edge, sc, print_episode);
    export_run(sc.out_dir, sc, records);
    save_agent(sc.out_dir + "/cloud.ckpt", cloud);
    std::printf("saved %s/cloud.ckpt\n", sc.out_dir.c_str());
    return 0;
}

int run_episodes(ScenarioConfig sc, bool fail_on_collision) {
    sc.validate();
    Hyperparams hp;
    std::optional<DdpgAgent> edge, cloud;
    if (sc.mode == Mode::RulesEdge || sc.mode == Mode::RulesEdgeCloud) {
        edge.emplace(Tier::Edge, hp, sc.seed);
        load_agent(sc.checkpoint, *edge);
    }
    if (sc.mode == Mode::RulesEdgeCloud) {
        cloud.emplace(Tier::Cloud, hp, sc.seed + 1);
        load_agent(sc.cloud_checkpoint, *cloud);
    }
    std::vector<EpisodeRecord> records;
    std::int64_t collided = 0;
    for (int ep = 0; ep < sc.episodes; ++ep) {
        EpisodeOptions opt;
        opt.scenario = sc;
        opt.episode_index = ep;
        opt.edge = edge ? &*edge : nullptr;
        opt.cloud = cloud ? &*cloud : nullptr;
        records.push_back(run_episode(opt));
        collided += records.back().collided;
        print_episode(records.back());
    }
    export_run(sc.out_dir, sc, records);
    if (fail_on_collision && collided > 0) {
        std::fprintf(stderr, "collision check failed: %lld collisions\n",
                     static_cast<long long>(collided));
        return 4;
    }
    return 0;
}

int run_export(const std::string& checkpoint) {
    const CheckpointMap segs = read_checkpoint(checkpoint);
    for (const auto& [name, seg] : segs) {
        std::printf("%s:", name.c_str());
        for (std::size_t i = 0; i < seg.shape.size(); ++i) {
            std::printf("%s%llu", i == 0 ? " " : "x",
                        static_cast<unsigned long long>(seg.shape[i]));
        }
        double sum = 0.0;
        for (double v : seg.data) sum += v * v;
        std::printf(" l2=%s\n", format_double(std::sqrt(sum)).c_str());
    }
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Multi-intersection traffic coordination simulator"};
    app.require_subcommand(1);

    CliArgs a;
    bool fail_on_collision = false;
    std::string export_path;

    CLI::App* t_edge = app.add_subcommand("train-edge", "Train the intersection-level agent");
    add_common_flags(t_edge, a);
    CLI::App* t_cloud = app.add_subcommand("train-cloud", "Train the network-level agent");
    add_common_flags(t_cloud, a);
    CLI::App* eval = app.add_subcommand("evaluate", "Run evaluation episodes");
    add_common_flags(eval, a);
    eval->add_option("--mode", a.mode, "Control stack: E, EE, EEC or signal");
    eval->add_flag("--fail-on-collision", fail_on_collision,
                   "Exit 4 if any collision occurs");
    CLI::App* base = app.add_subcommand("baseline", "Run the fixed-time signal baseline");
    add_common_flags(base, a);
    CLI::App* exp = app.add_subcommand("export", "Print checkpoint contents");
    exp->add_option("checkpoint", export_path, "Checkpoint file")->required();

    CLI11_PARSE(app, argc, argv);

    try {
        if (t_edge->parsed()) return run_train_edge(a);
        if (t_cloud->parsed()) return run_train_cloud(a);
        if (eval->parsed()) {
            ScenarioConfig sc = merge(a, ScenarioConfig{});
            return run_episodes(sc, fail_on_collision);
        }
        if (base->parsed()) {
            ScenarioConfig sc = merge(a, ScenarioConfig{});
            sc.mode = Mode::Signal;
            return run_episodes(sc, fail_on_collision);
        }
        if (exp->parsed()) return run_export(export_path);
    } catch (const std::invalid_argument& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 2;
    } catch (const std::runtime_error& e) {
        const std::string msg = e.what();
        std::fprintf(stderr, "error: %s\n", msg.c_str());
        if (msg.find("non-finite") != std::string::npos) return 3;
        return 5;
    }
    return 2;
}
