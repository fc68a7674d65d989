#pragma once

#include <cstdint>
#include <random>
#include <span>
#include <unordered_map>
#include <vector>

#include "crossflow/road_network.hpp"

namespace crossflow {

struct MotionLimits {
    double v_min = 6.0;
    double v_max = 13.0;
    double a_min = -3.0;
    double a_max = 3.0;
};

struct Vehicle {
    std::int64_t id = -1;
    int lane = -1;
    double pos = 0.0;   // meters along lane
    double vel = 0.0;   // m/s
    double acc = 0.0;   // m/s^2, held during the current step interval
};

struct CollisionEvent {
    std::int64_t step = 0;
    std::int64_t vehicle_a = 0;  // vehicle_a < vehicle_b
    std::int64_t vehicle_b = 0;
    int base_lane = -1;
    double gap = 0.0;
};

/// Eq.-of-motion step: integrates with the acceleration currently held by
/// the vehicle, then latches the commanded acceleration for the next
/// interval. If the raw velocity update leaves [v_min, v_max] the endpoint
/// velocity is clamped and displacement uses the trapezoid (v + v')/2 * dt.
Vehicle step_vehicle(const Vehicle& v, double commanded_accel, double dt,
                     const MotionLimits& lim = {});

/// Collision scan over an arbitrary population snapshot: same-lane pairs
/// closer than `vehicle_size` on their own lane, and crossing pairs whose
/// projections meet within `vehicle_size` of a shared conflict point.
/// Symmetric, deduplicated.
std::vector<CollisionEvent> detect_collisions(const RoadNetwork& net,
                                              std::span<const Vehicle> vehicles,
                                              double vehicle_size = 2.0, std::int64_t step = 0);

struct WorldConfig {
    int rows = 1;
    int cols = 1;
    double lane_length = 150.0;
    double dt = 0.1;
    MotionLimits limits;
    double vehicle_size = 2.0;
    double spawn_rate_per_hour = 300.0;  // per lane
    double min_spawn_gap = 10.0;
    double initial_velocity = 10.0;
    std::uint64_t seed = 1;
};

struct StepEvents {
    std::vector<CollisionEvent> collisions;
    std::vector<std::int64_t> spawned;
    std::vector<std::int64_t> retired;
};

/// Owns the vehicle population and advances it one discrete time step at a
/// time: simultaneous integration, retirement at lane end, Poisson
/// arrivals (deferred while the lane entry is blocked), and collision
/// detection on physical and virtual lanes. Single writer; snapshots of
/// `vehicles()` may be read freely between steps.
class World {
  public:
    explicit World(const WorldConfig& cfg);

    const WorldConfig& config() const { return cfg_; }
    const RoadNetwork& network() const { return net_; }
    const std::vector<Vehicle>& vehicles() const { return vehicles_; }
    const Vehicle* find(std::int64_t id) const;

    std::int64_t step_index() const { return step_; }

    /// One simulation step. `actions` maps vehicle id -> commanded
    /// acceleration; vehicles absent from the map keep their current
    /// acceleration. Unknown ids are rejected (stale controller output).
    StepEvents advance(const std::unordered_map<std::int64_t, double>& actions);

    std::int64_t spawned_total() const { return spawned_total_; }
    std::int64_t retired_total() const { return retired_total_; }
    std::int64_t collided_total() const { return collided_total_; }
    /// Arrivals generated but deferred because the lane entry was blocked.
    int pending_arrivals(int lane) const { return pending_[static_cast<size_t>(lane)]; }

    /// Collision scan of the current population (also run inside advance).
    std::vector<CollisionEvent> detect_collisions() const;

  private:
    void spawn_arrivals(StepEvents& ev);

    WorldConfig cfg_;
    RoadNetwork net_;
    std::vector<Vehicle> vehicles_;  // sorted by id
    std::vector<std::mt19937_64> lane_rng_;
    std::vector<int> pending_;
    std::int64_t next_id_ = 0;
    std::int64_t step_ = 0;
    std::int64_t spawned_total_ = 0;
    std::int64_t retired_total_ = 0;
    std::int64_t collided_total_ = 0;
};

}  // namespace crossflow
