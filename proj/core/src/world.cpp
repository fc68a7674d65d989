#include "crossflow/world.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <stdexcept>

#include "crossflow/virtual_lane.hpp"

namespace crossflow {

namespace {

double clamp(double x, double lo, double hi) { return std::min(std::max(x, lo), hi); }

}  // namespace

Vehicle step_vehicle(const Vehicle& v, double commanded_accel, double dt,
                     const MotionLimits& lim) {
    if (!(dt > 0.0)) throw std::invalid_argument("step_vehicle: dt must be positive");
    if (!std::isfinite(commanded_accel) || !std::isfinite(v.pos) || !std::isfinite(v.vel) ||
        !std::isfinite(v.acc)) {
        throw std::invalid_argument("step_vehicle: non-finite input");
    }

    Vehicle out = v;
    const double v_raw = v.vel + v.acc * dt;
    if (v_raw >= lim.v_min && v_raw <= lim.v_max) {
        out.pos = v.pos + v.vel * dt + 0.5 * v.acc * dt * dt;
        out.vel = v_raw;
    } else {
        // Effective-acceleration clamp: trapezoid displacement with the
        // clamped endpoint velocity.
        out.vel = clamp(v_raw, lim.v_min, lim.v_max);
        out.pos = v.pos + 0.5 * (v.vel + out.vel) * dt;
    }
    out.acc = clamp(commanded_accel, lim.a_min, lim.a_max);
    return out;
}

World::World(const WorldConfig& cfg)
    : cfg_(cfg), net_(cfg.rows, cfg.cols, cfg.lane_length) {
    if (cfg.spawn_rate_per_hour < 0.0) {
        throw std::invalid_argument("World: spawn rate must be non-negative");
    }
    if (!(cfg.dt > 0.0)) throw std::invalid_argument("World: dt must be positive");
    pending_.assign(net_.lanes().size(), 0);
    lane_rng_.reserve(net_.lanes().size());
    for (size_t l = 0; l < net_.lanes().size(); ++l) {
        lane_rng_.emplace_back(cfg.seed * 0x9E3779B97F4A7C15ULL + 0x2545F4914F6CDD1DULL * (l + 1));
    }
}

const Vehicle* World::find(std::int64_t id) const {
    auto it = std::lower_bound(vehicles_.begin(), vehicles_.end(), id,
                               [](const Vehicle& v, std::int64_t key) { return v.id < key; });
    if (it != vehicles_.end() && it->id == id) return &*it;
    return nullptr;
}

StepEvents World::advance(const std::unordered_map<std::int64_t, double>& actions) {
    for (const auto& [id, a] : actions) {
        if (!std::isfinite(a)) throw std::invalid_argument("advance: non-finite action");
        if (find(id) == nullptr) throw std::invalid_argument("advance: action for unknown vehicle");
    }

    StepEvents ev;

    // Simultaneous integration from the pre-step snapshot.
    for (Vehicle& v : vehicles_) {
        auto it = actions.find(v.id);
        const double commanded = (it != actions.end()) ? it->second : v.acc;
        v = step_vehicle(v, commanded, cfg_.dt, cfg_.limits);
    }

    // Retirement at the lane end.
    for (auto it = vehicles_.begin(); it != vehicles_.end();) {
        if (it->pos > net_.lane(it->lane).length) {
            ev.retired.push_back(it->id);
            ++retired_total_;
            it = vehicles_.erase(it);
        } else {
            ++it;
        }
    }

    spawn_arrivals(ev);

    ev.collisions = detect_collisions();
    if (!ev.collisions.empty()) {
        std::set<std::int64_t> dead;
        for (const CollisionEvent& c : ev.collisions) {
            dead.insert(c.vehicle_a);
            dead.insert(c.vehicle_b);
        }
        std::erase_if(vehicles_, [&](const Vehicle& v) { return dead.count(v.id) > 0; });
        collided_total_ += static_cast<std::int64_t>(dead.size());
    }

    ++step_;
    return ev;
}

void World::spawn_arrivals(StepEvents& ev) {
    const double p = cfg_.spawn_rate_per_hour * cfg_.dt / 3600.0;
    std::uniform_real_distribution<double> uni(0.0, 1.0);
    for (const Lane& lane : net_.lanes()) {
        const size_t l = static_cast<size_t>(lane.id);
        if (uni(lane_rng_[l]) < p) ++pending_[l];
        if (pending_[l] == 0) continue;

        // Entry occupancy is judged on the lane's virtual view: a crossing
        // vehicle whose projection lands on the entry segment is the same
        // downstream conflict the newcomer would be born into.
        bool blocked = false;
        const VirtualLane vl = build_virtual_lane(net_, lane.id, vehicles_);
        for (const VirtualLaneEntry& e : vl.entries) {
            if (e.pos >= cfg_.min_spawn_gap) break;  // sorted by position
            blocked = true;
            break;
        }
        if (blocked) continue;  // deferred, not dropped

        Vehicle nv;
        nv.id = next_id_++;
        nv.lane = lane.id;
        nv.pos = 0.0;
        nv.vel = cfg_.initial_velocity;
        nv.acc = 0.0;
        vehicles_.push_back(nv);
        ev.spawned.push_back(nv.id);
        ++spawned_total_;
        --pending_[l];
    }
    std::sort(vehicles_.begin(), vehicles_.end(),
              [](const Vehicle& a, const Vehicle& b) { return a.id < b.id; });
}

std::vector<CollisionEvent> World::detect_collisions() const {
    return crossflow::detect_collisions(net_, vehicles_, cfg_.vehicle_size, step_);
}

std::vector<CollisionEvent> detect_collisions(const RoadNetwork& net,
                                              std::span<const Vehicle> vehicles,
                                              double vehicle_size, std::int64_t step) {
    std::vector<CollisionEvent> out;
    std::set<std::pair<std::int64_t, std::int64_t>> seen;
    const double size = vehicle_size;

    auto emit = [&](std::int64_t a, std::int64_t b, int base_lane, double gap) {
        if (a > b) std::swap(a, b);
        if (!seen.insert({a, b}).second) return;
        out.push_back({step, a, b, base_lane, gap});
    };

    for (const Lane& lane : net.lanes()) {
        const VirtualLane vl = build_virtual_lane(net, lane.id, vehicles);
        for (size_t i = 0; i + 1 < vl.entries.size(); ++i) {
            for (size_t j = i + 1; j < vl.entries.size(); ++j) {
                const VirtualLaneEntry& a = vl.entries[i];
                const VirtualLaneEntry& b = vl.entries[j];
                const double gap = b.pos - a.pos;
                if (gap >= size) break;  // entries are sorted
                if (a.origin_lane == b.origin_lane) {
                    if (a.origin_lane == lane.id) emit(a.vehicle_id, b.vehicle_id, lane.id, gap);
                    continue;  // same physical lane is handled on its own base lane
                }
                // Crossing pair: relevant only while both are inside the
                // conflict window. Distance preservation lets every check
                // run in base-lane coordinates.
                if (a.origin_lane != lane.id && b.origin_lane != lane.id) continue;
                const VirtualLaneEntry& proj = (a.origin_lane == lane.id) ? b : a;
                const VirtualLaneEntry& base = (a.origin_lane == lane.id) ? a : b;
                const ConflictPoint& cp = net.conflict_point(proj.via_conflict);
                const double cp_pos = net.conflict_pos_on(cp, lane.id);
                if (std::abs(base.pos - cp_pos) <= size && std::abs(proj.pos - cp_pos) <= size) {
                    emit(a.vehicle_id, b.vehicle_id, lane.id, gap);
                }
            }
        }
    }
    return out;
}

}  // namespace crossflow
