#pragma once

#include <cmath>
#include <limits>
#include <optional>
#include <vector>

#include "neei/errors.hpp"
#include "neei/geometry.hpp"

namespace neei {

struct DynamicObstacle {
    ConvexPolygon shape; // pose at t = 0
    Vec2 velocity_mps{0.0, 0.0};
    double active_from_s = 0.0;

    ConvexPolygon shape_at(double t) const {
        const double dt = std::max(0.0, t - active_from_s);
        return shape.translated(velocity_mps * dt);
    }
};

struct World {
    std::vector<ConvexPolygon> obstacles;
    std::vector<DynamicObstacle> dynamic_obstacles;
    Rect bounds{0.0, 0.0, 0.0, 0.0};
    // planner-side map staleness: rollout clearance queries see obstacle poses
    // at t - map_staleness_s (trace audits always use true poses)
    double map_staleness_s = 0.0;

    bool empty() const { return obstacles.empty() && dynamic_obstacles.empty(); }
};

struct ControlInput {
    double v = 0.0;     // m/s
    double omega = 0.0; // rad/s
};

struct ControlLimits {
    double v_max = std::numeric_limits<double>::infinity();
    double omega_max = std::numeric_limits<double>::infinity();
};

struct RobotState {
    Vec2 position{0.0, 0.0};
    double heading = 0.0; // wrapped to (-pi, pi]
    double linear_vel = 0.0;
    double angular_vel = 0.0;
    ConvexPolygon footprint = ConvexPolygon::axis_aligned_box({0, 0}, 0.15, 0.15); // body frame

    ConvexPolygon world_footprint() const { return footprint.transformed(position, heading); }
};

// Unicycle update with closed-form arc integration for |omega| > 1e-6.
inline RobotState step_dynamics(const RobotState& state, ControlInput u, double dt,
                                ControlLimits limits = {}) {
    if (!(dt > 0.0))
        throw ValidationError("step_dynamics needs dt > 0");
    if (std::fabs(u.v) > limits.v_max + 1e-12 || std::fabs(u.omega) > limits.omega_max + 1e-12)
        throw ControlLimitViolation("control exceeds limits");
    RobotState next = state;
    const double th = state.heading;
    if (std::fabs(u.omega) > 1e-6) {
        const double r = u.v / u.omega;
        next.position.x += r * (std::sin(th + u.omega * dt) - std::sin(th));
        next.position.y += r * (std::cos(th) - std::cos(th + u.omega * dt));
    } else {
        next.position.x += u.v * std::cos(th) * dt;
        next.position.y += u.v * std::sin(th) * dt;
    }
    next.heading = wrap_angle(th + u.omega * dt);
    next.linear_vel = u.v;
    next.angular_vel = u.omega;
    return next;
}

// Minimum distance from the robot footprint to any obstacle at time t;
// +inf for an obstacle-free world.
inline double clearance(const RobotState& state, const World& world, double t) {
    if (world.empty())
        return std::numeric_limits<double>::infinity();
    const ConvexPolygon fp = state.world_footprint();
    double best = std::numeric_limits<double>::infinity();
    for (const auto& ob : world.obstacles)
        best = std::min(best, min_distance(fp, ob));
    for (const auto& dob : world.dynamic_obstacles)
        best = std::min(best, min_distance(fp, dob.shape_at(t)));
    return best;
}

// clearance as seen by a planner whose map is map_staleness_s old
inline double planning_clearance(const RobotState& state, const World& world, double t) {
    return clearance(state, world, std::max(0.0, t - world.map_staleness_s));
}

namespace detail {
inline std::pair<Vec2, double> bounding_circle(const ConvexPolygon& p) {
    Vec2 c{0, 0};
    for (Vec2 v : p.vertices())
        c += v;
    c = c * (1.0 / static_cast<double>(p.size()));
    double r = 0.0;
    for (Vec2 v : p.vertices())
        r = std::max(r, distance(c, v));
    return {c, r};
}
} // namespace detail

// Early-exit feasibility check used in planner rollouts: is the clearance at
// the planner's (possibly stale) map time at least `margin`?
inline bool planning_clearance_at_least(const RobotState& state, const World& world, double t, double margin) {
    if (world.empty())
        return true;
    const double tq = std::max(0.0, t - world.map_staleness_s);
    const ConvexPolygon fp = state.world_footprint();
    const auto [fc, fr] = detail::bounding_circle(fp);
    for (const auto& ob : world.obstacles) {
        const auto [oc, orad] = detail::bounding_circle(ob);
        if (distance(fc, oc) - fr - orad >= margin)
            continue;
        if (min_distance(fp, ob) < margin)
            return false;
    }
    for (const auto& dob : world.dynamic_obstacles) {
        const ConvexPolygon ob = dob.shape_at(tq);
        const auto [oc, orad] = detail::bounding_circle(ob);
        if (distance(fc, oc) - fr - orad >= margin)
            continue;
        if (min_distance(fp, ob) < margin)
            return false;
    }
    return true;
}

// ---------------------------------------------------------------------------
// Waypoint paths
// ---------------------------------------------------------------------------

inline double path_length(const std::vector<Vec2>& path) {
    double s = 0.0;
    for (std::size_t i = 0; i + 1 < path.size(); ++i)
        s += distance(path[i], path[i + 1]);
    return s;
}

// Arc-length of the closest point on the polyline to p.
inline double path_progress(const std::vector<Vec2>& path, Vec2 p) {
    if (path.empty())
        return 0.0;
    if (path.size() == 1)
        return 0.0;
    double best_d = std::numeric_limits<double>::infinity();
    double best_s = 0.0;
    double s_acc = 0.0;
    for (std::size_t i = 0; i + 1 < path.size(); ++i) {
        const Vec2 a = path[i], b = path[i + 1];
        const double seg_len = distance(a, b);
        double t = 0.0;
        if (seg_len > 1e-12)
            t = std::clamp((p - a).dot(b - a) / (seg_len * seg_len), 0.0, 1.0);
        const Vec2 proj = a + (b - a) * t;
        const double d = distance(p, proj);
        if (d < best_d) {
            best_d = d;
            best_s = s_acc + t * seg_len;
        }
        s_acc += seg_len;
    }
    return best_s;
}

inline Vec2 path_point_at(const std::vector<Vec2>& path, double s) {
    if (path.empty())
        return {0, 0};
    if (s <= 0.0)
        return path.front();
    for (std::size_t i = 0; i + 1 < path.size(); ++i) {
        const double seg_len = distance(path[i], path[i + 1]);
        if (s <= seg_len && seg_len > 1e-12)
            return path[i] + (path[i + 1] - path[i]) * (s / seg_len);
        s -= seg_len;
    }
    return path.back();
}

struct TrackerConfig {
    double lookahead_m = 0.5;
    double v_ref = 0.5;
    double omega_max = 2.0;
    double goal_tolerance_m = 0.2;
};

// Pure-pursuit control toward the first path point at >= lookahead distance
// (measured along the path from the current projection). Zero control once
// the final point is within the goal tolerance.
inline ControlInput path_waypoint_tracker(const std::vector<Vec2>& path, const RobotState& state,
                                          const TrackerConfig& cfg) {
    if (path.empty())
        throw ValidationError("tracker needs a nonempty path");
    if (distance(state.position, path.back()) <= cfg.goal_tolerance_m)
        return {0.0, 0.0};
    const double s = path_progress(path, state.position);
    Vec2 target = path_point_at(path, s + cfg.lookahead_m);
    if (distance(target, state.position) < 0.5 * cfg.lookahead_m)
        target = path.back();
    const Vec2 rel = target - state.position;
    const double bearing = wrap_angle(std::atan2(rel.y, rel.x) - state.heading);
    // slow down for sharp turns so the arc stays tight
    const double v = cfg.v_ref * (std::fabs(bearing) > M_PI_2 ? 0.2 : 1.0);
    const double omega =
        std::clamp(2.0 * v * std::sin(bearing) / std::max(cfg.lookahead_m, 1e-6), -cfg.omega_max, cfg.omega_max);
    return {v, omega};
}

} // namespace neei
