#pragma once

#include <span>
#include <string>

#include "crossflow/episode.hpp"

namespace crossflow {

/// Shortest round-trippable decimal form ("%.17g"-style, locale free).
std::string format_double(double v);

void write_episodes_csv(const std::string& path, const ScenarioConfig& cfg,
                        std::span<const EpisodeRecord> records);
void write_heat_map(const std::string& path, const HeatMap& heat);
void write_config_echo(const std::string& path, const ScenarioConfig& cfg);
void write_record_json(const std::string& path, const ScenarioConfig& cfg,
                       std::span<const EpisodeRecord> records);

/// Writes the full artifact set for one run into `dir`: episodes.csv,
/// config.txt, record.json and per-episode heat maps (final and peak
/// population snapshots). Output bytes are a pure function of the inputs.
void export_run(const std::string& dir, const ScenarioConfig& cfg,
                std::span<const EpisodeRecord> records);

}  // namespace crossflow
