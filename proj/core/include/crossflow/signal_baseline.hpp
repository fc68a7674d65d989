#pragma once

#include <cstdint>
#include <map>
#include <span>

#include "crossflow/road_network.hpp"
#include "crossflow/world.hpp"

namespace crossflow {

/// Fixed-time two-phase signal plan shared by every intersection:
/// horizontal green, all-red clearance, vertical green, all-red clearance.
struct SignalTiming {
    double cycle = 30.0;
    double all_red = 2.0;        // after each green phase
    double stop_offset = 5.0;    // stop line this far before the conflict point
    double green() const { return cycle / 2.0 - all_red; }
};

/// Whether lanes on `axis` have green at absolute time `t` (seconds).
bool signal_green(Axis axis, double t, const SignalTiming& timing = {});

/// Commanded accelerations for every vehicle under signal control:
/// stop at the line on red unless already committed (cannot brake to a
/// stand before it), otherwise simple gap-keeping car following.
std::map<std::int64_t, double> signal_actions(const RoadNetwork& net,
                                              std::span<const Vehicle> vehicles, double t,
                                              const SignalTiming& timing = {},
                                              const MotionLimits& limits = {});

}  // namespace crossflow
