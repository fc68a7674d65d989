#include "crossflow/assessment.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace crossflow {

double distance_sv(double d_nearest, const SvParams& p) {
    if (!(d_nearest > 0.0)) {
        throw std::domain_error("distance_sv: non-positive distance (already collided)");
    }
    return p.beta_d * std::log(d_nearest / p.alpha_d);
}

double ttc(double gap, double closing_speed) {
    if (!(gap > 0.0)) throw std::domain_error("ttc: gap must be positive");
    if (closing_speed > 0.0) return gap / closing_speed;
    return std::numeric_limits<double>::infinity();
}

double time_sv(double t_nearest, const SvParams& p) {
    if (t_nearest > 0.0 && t_nearest < 1.0) {
        return -std::pow(p.alpha_t / std::tanh(-t_nearest), p.beta_t);
    }
    return 2.0;
}

double accel_sv(double d_front, double acc_front, const SvParams& p) {
    if (!(d_front > 0.0)) throw std::domain_error("accel_sv: non-positive front distance");
    const double ratio = std::min(d_front / p.d_threshold, p.alpha_acc);
    return p.lambda_acc * acc_front * p.beta_acc * std::log(ratio);
}

double combine_sv(double sv_d, double sv_t, double sv_acc, const SvParams& p) {
    return std::clamp(sv_d + sv_t + sv_acc, p.sv_min, p.sv_max);
}

double density_indicator(std::span<const double> positions, int index, int n) {
    const int count = static_cast<int>(positions.size());
    if (count < 2) return 0.0;
    if (index < 0 || index >= count) throw std::out_of_range("density_indicator: bad index");
    if (n < 1) throw std::invalid_argument("density_indicator: n must be >= 1");

    const int fore = std::min(index + n, count - 1);
    const int aft = std::max(index - n, 0);
    const double local = std::abs(positions[static_cast<size_t>(fore)] -
                                  positions[static_cast<size_t>(aft)]) / (2.0 * n);
    const double global = std::abs(positions[static_cast<size_t>(count - 1)] - positions[0]) /
                          (count - 1);
    return std::abs(local - global);
}

SafetyValue combined_sv_for(const VirtualLane& vlane, std::int64_t ego_id, const SvParams& p) {
    const int self = vlane.index_of(ego_id);
    if (self < 0) throw std::invalid_argument("combined_sv_for: vehicle not on virtual lane");
    const VirtualLaneEntry& ego = vlane.entries[static_cast<size_t>(self)];

    SafetyValue sv;
    const auto nn = nearest_neighbors(vlane, ego_id, 1);
    if (nn.empty()) {
        sv.sv_d = distance_sv(2.0 * vlane.base_length, p);
        sv.sv_t = time_sv(std::numeric_limits<double>::infinity(), p);
        sv.sv_acc = 0.0;
        sv.combined = combine_sv(sv.sv_d, sv.sv_t, sv.sv_acc, p);
        return sv;
    }

    const VirtualLaneEntry& near = vlane.entries[static_cast<size_t>(nn[0].entry_index)];
    // Coincident projections (two vehicles equidistant from a shared
    // conflict point) give a zero gap; floor it so the danger terms
    // saturate instead of leaving the log/ratio domains.
    const double d_nearest = std::max(std::abs(nn[0].gap), 0.01);
    const double closing = (nn[0].gap >= 0.0) ? ego.vel - near.vel : near.vel - ego.vel;
    sv.sv_d = distance_sv(d_nearest, p);
    sv.sv_t = time_sv(ttc(d_nearest, closing), p);

    // Acceleration term from the nearest vehicle ahead, if any.
    sv.sv_acc = 0.0;
    double front_gap = std::numeric_limits<double>::infinity();
    const VirtualLaneEntry* front = nullptr;
    for (size_t i = static_cast<size_t>(self) + 1; i < vlane.entries.size(); ++i) {
        const double g = vlane.entries[i].pos - ego.pos;
        if (g > 0.0 && g < front_gap) {
            front_gap = g;
            front = &vlane.entries[i];
            break;  // entries sorted: the first strictly-ahead entry is nearest
        }
    }
    if (front != nullptr) sv.sv_acc = accel_sv(front_gap, front->acc, p);

    sv.combined = combine_sv(sv.sv_d, sv.sv_t, sv.sv_acc, p);
    return sv;
}

}  // namespace crossflow
