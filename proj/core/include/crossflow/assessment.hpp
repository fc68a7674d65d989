#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "crossflow/virtual_lane.hpp"

namespace crossflow {

struct SvParams {
    double alpha_d = 10.0;
    double beta_d = 10.0;
    double alpha_t = 1.5;
    double beta_t = 2.0;
    double alpha_acc = 1.5;
    double beta_acc = 12.0;
    double lambda_acc = 0.2;
    double sv_max = 20.0;
    double sv_min = -20.0;
    double d_threshold = 10.0;
};

struct SafetyValue {
    double sv_d = 0.0;
    double sv_t = 0.0;
    double sv_acc = 0.0;
    double combined = 0.0;
};

/// beta_d * ln(d/alpha_d). Rejects d <= 0: at that point a collision has
/// already happened and callers must pre-filter.
double distance_sv(double d_nearest, const SvParams& p = {});

/// Time to collision: gap / closing_speed, +infinity when not closing.
double ttc(double gap, double closing_speed);

/// -[alpha_t / tanh(-t)]^beta_t inside the sensitive range 0 < t < 1,
/// otherwise 2.
double time_sv(double t_nearest, const SvParams& p = {});

/// lambda_acc * acc_front * beta_acc * ln(min(d_front/d_threshold, alpha_acc)).
double accel_sv(double d_front, double acc_front, const SvParams& p = {});

/// clip(sv_d + sv_t + sv_acc, sv_min, sv_max).
double combine_sv(double sv_d, double sv_t, double sv_acc, const SvParams& p = {});

/// Deviation of local mean spacing around vehicle `index` (n-th neighbor
/// fore and aft, clamped to the lane extremes) from the lane-wide mean
/// spacing. `positions` must be sorted ascending. Returns 0 with fewer
/// than 2 vehicles.
double density_indicator(std::span<const double> positions, int index, int n = 5);

/// Full safety value for one vehicle on its virtual lane: distance and TTC
/// terms from the nearest neighbor by |gap|, acceleration term from the
/// nearest downstream neighbor. A lone vehicle is scored with the distance
/// capped at 2x the base lane length and an infinite TTC.
SafetyValue combined_sv_for(const VirtualLane& vlane, std::int64_t ego_id,
                            const SvParams& p = {});

}  // namespace crossflow
