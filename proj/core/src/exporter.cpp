#include "crossflow/exporter.hpp"

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <stdexcept>

#include <json.hpp>

namespace crossflow {

namespace {

std::ofstream open_out(const std::string& path) {
    std::ofstream os(path, std::ios::binary | std::ios::trunc);
    if (!os) throw std::runtime_error("export: cannot open for write: " + path);
    return os;
}

void finish(std::ofstream& os, const std::string& path) {
    os.flush();
    if (!os) throw std::runtime_error("export: write failed: " + path);
}

}  // namespace

std::string format_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

void write_episodes_csv(const std::string& path, const ScenarioConfig& cfg,
                        std::span<const EpisodeRecord> records) {
    std::ofstream os = open_out(path);
    os << "# seed=" << cfg.seed << " config=" << cfg.hash() << "\n";
    os << "episode,mode,steps,spawned,retired,collided,mean_velocity,mean_reward,"
          "mean_travel_time,critic_loss,actor_q,peak_population,peak_step\n";
    for (const EpisodeRecord& r : records) {
        os << r.episode << ',' << mode_name(r.mode) << ',' << r.steps << ',' << r.spawned << ','
           << r.retired << ',' << r.collided << ',' << format_double(r.mean_velocity) << ','
           << format_double(r.mean_reward) << ',' << format_double(r.mean_travel_time) << ','
           << format_double(r.critic_loss) << ',' << format_double(r.actor_q) << ','
           << r.peak_population << ',' << r.peak_step << "\n";
    }
    finish(os, path);
}

void write_heat_map(const std::string& path, const HeatMap& heat) {
    std::ofstream os = open_out(path);
    os << "# cell=" << format_double(heat.cell) << " nx=" << heat.nx << " ny=" << heat.ny << "\n";
    os << "# occupancy\n";
    for (int iy = 0; iy < heat.ny; ++iy) {
        for (int ix = 0; ix < heat.nx; ++ix) {
            if (ix > 0) os << ' ';
            os << heat.at(ix, iy);
        }
        os << "\n";
    }
    os << "# mean velocity\n";
    for (int iy = 0; iy < heat.ny; ++iy) {
        for (int ix = 0; ix < heat.nx; ++ix) {
            if (ix > 0) os << ' ';
            os << format_double(heat.vel_at(ix, iy));
        }
        os << "\n";
    }
    finish(os, path);
}

void write_config_echo(const std::string& path, const ScenarioConfig& cfg) {
    std::ofstream os = open_out(path);
    os << "# config hash " << cfg.hash() << "\n" << cfg.canonical();
    if (!cfg.checkpoint.empty()) os << "checkpoint=" << cfg.checkpoint << "\n";
    if (!cfg.cloud_checkpoint.empty()) os << "cloud_checkpoint=" << cfg.cloud_checkpoint << "\n";
    finish(os, path);
}

void write_record_json(const std::string& path, const ScenarioConfig& cfg,
                       std::span<const EpisodeRecord> records) {
    nlohmann::ordered_json doc;
    doc["config"] = {
        {"rows", cfg.rows},         {"cols", cfg.cols},   {"density", cfg.density},
        {"seed", cfg.seed},         {"episodes", cfg.episodes},
        {"steps", cfg.steps},       {"mode", mode_name(cfg.mode)},
        {"dt", cfg.dt},             {"hash", cfg.hash()},
    };
    doc["episodes"] = nlohmann::ordered_json::array();
    for (const EpisodeRecord& r : records) {
        nlohmann::ordered_json e = {
            {"episode", r.episode},
            {"mode", mode_name(r.mode)},
            {"steps", r.steps},
            {"spawned", r.spawned},
            {"retired", r.retired},
            {"collided", r.collided},
            {"mean_velocity", r.mean_velocity},
            {"mean_reward", r.mean_reward},
            {"mean_travel_time", r.mean_travel_time},
            {"critic_loss", r.critic_loss},
            {"actor_q", r.actor_q},
            {"peak_population", r.peak_population},
            {"peak_step", r.peak_step},
        };
        e["step_mean_velocity"] = nlohmann::ordered_json::array();
        for (double v : r.step_mean_velocity) {
            if (std::isnan(v)) {
                e["step_mean_velocity"].push_back(nullptr);
            } else {
                e["step_mean_velocity"].push_back(v);
            }
        }
        e["critic_losses"] = r.critic_losses;
        e["actor_qs"] = r.actor_qs;
        e["collisions"] = nlohmann::ordered_json::array();
        for (const CollisionEvent& c : r.collisions) {
            e["collisions"].push_back({{"step", c.step},
                                       {"vehicle_a", c.vehicle_a},
                                       {"vehicle_b", c.vehicle_b},
                                       {"base_lane", c.base_lane},
                                       {"gap", c.gap}});
        }
        doc["episodes"].push_back(std::move(e));
    }
    std::ofstream os = open_out(path);
    os << doc.dump(2) << "\n";
    finish(os, path);
}

void export_run(const std::string& dir, const ScenarioConfig& cfg,
                std::span<const EpisodeRecord> records) {
    std::filesystem::create_directories(dir);
    write_episodes_csv(dir + "/episodes.csv", cfg, records);
    write_config_echo(dir + "/config.txt", cfg);
    write_record_json(dir + "/record.json", cfg, records);
    for (const EpisodeRecord& r : records) {
        const std::string stem = dir + "/heat_ep" + std::to_string(r.episode);
        write_heat_map(stem + "_final.txt", r.heat_final);
        write_heat_map(stem + "_peak.txt", r.heat_peak);
    }
}

}  // namespace crossflow
