#include "crossflow/end_controller.hpp"

#include <algorithm>
#include <stdexcept>

namespace crossflow {

double onboard_action(double safety_value, double d_front, double d_behind,
                      const FusionParams& p) {
    if (!std::isfinite(safety_value)) {
        throw std::invalid_argument("onboard_action: non-finite safety value");
    }
    if (d_front < 0.0 || d_behind < 0.0 || std::isnan(d_front) || std::isnan(d_behind)) {
        throw std::invalid_argument("onboard_action: distances must be nonnegative");
    }
    const double a = safety_value / p.eta;
    const double raw = d_front <= d_behind ? std::fabs(a) : a;
    return std::clamp(raw, p.a_min, p.a_max);
}

double fuse_edge(double edge_action, double onboard, const FusionParams& p) {
    const double chosen =
        edge_action * onboard > 0.0 ? std::max(edge_action, onboard) : onboard;
    return std::clamp(chosen, p.a_min, p.a_max);
}

double fuse_cloud(double executing, double cloud_action, const FusionParams& p) {
    return std::clamp((1.0 - p.omega) * executing + p.omega * cloud_action, p.a_min, p.a_max);
}

double resolve(double safety_value, double d_front, double d_behind,
               std::optional<double> edge_action, std::optional<double> cloud_action,
               const FusionParams& p) {
    double a = onboard_action(safety_value, d_front, d_behind, p);
    if (edge_action) a = fuse_edge(*edge_action, a, p);
    if (cloud_action) a = fuse_cloud(a, *cloud_action, p);
    return std::clamp(a, p.a_min, p.a_max);
}

}  // namespace crossflow
