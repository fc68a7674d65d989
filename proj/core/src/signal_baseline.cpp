#include "crossflow/signal_baseline.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace crossflow {

bool signal_green(Axis axis, double t, const SignalTiming& timing) {
    const double phase = std::fmod(t, timing.cycle);
    if (axis == Axis::Horizontal) return phase < timing.green();
    return phase >= timing.cycle / 2.0 && phase < timing.cycle / 2.0 + timing.green();
}

namespace {

/// Gap-keeping against the same-lane leader: accelerate up to the braking
/// envelope that still lets the vehicle stop behind a halting leader.
double car_following(const Vehicle& v, const Vehicle* leader, const MotionLimits& lim,
                     double margin) {
    double accel = v.vel < lim.v_max ? lim.a_max : 0.0;
    if (leader != nullptr) {
        const double gap = leader->pos - v.pos;
        const double brake = -lim.a_min;
        const double v2 = leader->vel * leader->vel + 2.0 * brake * (gap - margin);
        const double v_allowed = v2 <= 0.0 ? 0.0 : std::sqrt(v2);
        accel = std::min(accel, (v_allowed - v.vel) / 0.1);
    }
    return std::clamp(accel, lim.a_min, lim.a_max);
}

/// Deceleration that brings the vehicle to rest exactly at `dist` ahead.
double stopping_accel(double vel, double dist) {
    if (dist <= 0.0) return 0.0;
    return -(vel * vel) / (2.0 * dist);
}

}  // namespace

std::map<std::int64_t, double> signal_actions(const RoadNetwork& net,
                                              std::span<const Vehicle> vehicles, double t,
                                              const SignalTiming& timing,
                                              const MotionLimits& limits) {
    std::map<std::int64_t, double> out;
    for (const Vehicle& v : vehicles) {
        // same-lane leader
        const Vehicle* leader = nullptr;
        for (const Vehicle& o : vehicles) {
            if (o.lane != v.lane || o.pos <= v.pos || o.id == v.id) continue;
            if (leader == nullptr || o.pos < leader->pos) leader = &o;
        }
        double accel = car_following(v, leader, limits, 6.0);

        if (!signal_green(net.lane(v.lane).axis, t, timing)) {
            // stop line before the nearest conflict point ahead
            double line = std::numeric_limits<double>::infinity();
            for (int cid : net.conflicts_on(v.lane)) {
                const double p = net.conflict_pos_on(net.conflict_point(cid), v.lane) -
                                 timing.stop_offset;
                if (p >= v.pos && p < line) line = p;
            }
            if (std::isfinite(line)) {
                const double dist = line - v.pos;
                const double need = stopping_accel(v.vel, dist);
                if (dist < 0.5) {
                    accel = limits.a_min;  // hold at the line
                } else if (need >= limits.a_min) {
                    // committed vehicles (need < a_min) proceed through
                    accel = std::min(accel, need);
                }
            }
        }
        out[v.id] = std::clamp(accel, limits.a_min, limits.a_max);
    }
    return out;
}

}  // namespace crossflow
