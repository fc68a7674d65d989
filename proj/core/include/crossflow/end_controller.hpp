#pragma once

#include <cmath>
#include <limits>
#include <optional>

namespace crossflow {

struct FusionParams {
    double eta = 3.0;     // safety value to acceleration divisor
    double omega = 0.2;   // weight of the coordination term in the blend
    double a_min = -3.0;
    double a_max = 3.0;
};

/// Onboard fallback rule: scale the safety value down to an acceleration.
/// When the forward distance does not exceed the rearward one the magnitude
/// is taken, so the vehicle clears the bottleneck instead of stalling in
/// it. Missing neighbors enter as +infinity (two infinities tie into the
/// magnitude branch).
double onboard_action(double safety_value, double d_front, double d_behind,
                      const FusionParams& p);

/// Onboard/edge arbitration: follow the edge command only when it agrees in
/// sign with the onboard rule, otherwise fall back to the onboard rule.
double fuse_edge(double edge_action, double onboard, const FusionParams& p);

/// Blend the executing action with the coordination-level command.
double fuse_cloud(double executing, double cloud_action, const FusionParams& p);

/// Full per-vehicle arbitration for one control step. Either advisory may
/// be absent (vehicle outside its control region or tier disabled).
double resolve(double safety_value, double d_front, double d_behind,
               std::optional<double> edge_action, std::optional<double> cloud_action,
               const FusionParams& p = {});

}  // namespace crossflow
