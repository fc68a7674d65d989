#pragma once

#include <cstdint>
#include <map>
#include <string>

namespace crossflow {

/// Control stack configuration: onboard rules only, rules + edge nodes,
/// rules + edge + cloud, or the fixed-time signal baseline.
enum class Mode { Rules, RulesEdge, RulesEdgeCloud, Signal };

Mode parse_mode(const std::string& s);  // "E", "EE", "EEC", "signal"
std::string mode_name(Mode m);

struct ScenarioConfig {
    int rows = 1;
    int cols = 1;
    double density = 900.0;  // spawned vehicles per lane per hour
    std::uint64_t seed = 1;
    int episodes = 1;
    int steps = 3000;
    Mode mode = Mode::Rules;
    double dt = 0.1;
    std::string checkpoint;        // edge agent weights (modes EE / EEC)
    std::string cloud_checkpoint;  // cloud agent weights (mode EEC)
    std::string out_dir = ".";

    void validate() const;  // throws std::invalid_argument on bad values
    std::string hash() const;  // FNV-1a over the canonical key=value text
    std::string canonical() const;
};

/// Parses `key=value` lines ('#' comments, blank lines allowed) into the
/// given config. Unknown keys throw. CLI flags are applied on top by the
/// caller, so file values act as defaults.
void apply_config_file(ScenarioConfig& cfg, const std::string& path);
void apply_config_pairs(ScenarioConfig& cfg, const std::map<std::string, std::string>& kv);

}  // namespace crossflow
