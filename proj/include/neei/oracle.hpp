#pragma once

#include <algorithm>
#include <cmath>
#include <vector>

#include "neei/channel.hpp"
#include "neei/errors.hpp"
#include "neei/geometry.hpp"
#include "neei/rng.hpp"
#include "neei/vbf.hpp"

namespace neei {

// Brute-force polygon distance: sample each boundary densely and take the
// minimum exact point-to-boundary distance both ways. Deliberately ignorant
// of the SAT/edge-pair implementation it is used to check.
inline double sampled_min_distance(const ConvexPolygon& a, const ConvexPolygon& b, int samples_per_boundary) {
    if (samples_per_boundary < 2)
        throw InstanceTooLarge("boundary oracle needs at least 2 samples");
    for (const Vec2 v : a.vertices())
        if (b.contains(v))
            return 0.0;
    for (const Vec2 v : b.vertices())
        if (a.contains(v))
            return 0.0;
    const auto boundary_points = [samples_per_boundary](const ConvexPolygon& p) {
        std::vector<Vec2> pts;
        pts.reserve(samples_per_boundary);
        const double perim = p.perimeter();
        const auto& verts = p.vertices();
        std::size_t edge = 0;
        double edge_start = 0.0;
        double edge_len = distance(verts[0], verts[1]);
        for (int i = 0; i < samples_per_boundary; ++i) {
            double s = perim * static_cast<double>(i) / samples_per_boundary;
            while (s > edge_start + edge_len && edge + 1 < verts.size()) {
                edge_start += edge_len;
                ++edge;
                edge_len = distance(verts[edge], verts[(edge + 1) % verts.size()]);
            }
            const double t = edge_len > 1e-12 ? (s - edge_start) / edge_len : 0.0;
            pts.push_back(verts[edge] + (verts[(edge + 1) % verts.size()] - verts[edge]) * std::min(1.0, t));
        }
        return pts;
    };
    const auto exact_to_boundary = [](Vec2 p, const ConvexPolygon& poly) {
        double best = std::numeric_limits<double>::infinity();
        const auto& verts = poly.vertices();
        for (std::size_t i = 0; i < verts.size(); ++i)
            best = std::min(best, point_segment_distance(p, verts[i], verts[(i + 1) % verts.size()]));
        return best;
    };
    double best = std::numeric_limits<double>::infinity();
    for (const Vec2 p : boundary_points(a))
        best = std::min(best, exact_to_boundary(p, b));
    for (const Vec2 p : boundary_points(b))
        best = std::min(best, exact_to_boundary(p, a));
    return best;
}

// Random strictly convex polygon: points on a randomly squashed circle,
// sorted by angle (distinct angles guarantee strict convexity).
inline ConvexPolygon random_convex_polygon(Rng& rng, int max_vertices = 8) {
    const int n = 3 + static_cast<int>(rng.uniform01() * (max_vertices - 2));
    const Vec2 center{rng.uniform(-4.0, 4.0), rng.uniform(-4.0, 4.0)};
    const double rx = rng.uniform(0.3, 2.0), ry = rng.uniform(0.3, 2.0);
    const double rot = rng.uniform(0.0, 2.0 * M_PI);
    std::vector<double> angles;
    for (int i = 0; i < n; ++i)
        angles.push_back(rng.uniform(0.0, 2.0 * M_PI));
    std::sort(angles.begin(), angles.end());
    for (std::size_t i = 0; i + 1 < angles.size(); ++i)
        if (angles[i + 1] - angles[i] < 0.05)
            angles[i + 1] = angles[i] + 0.05; // keep vertices angularly separated
    if (angles.back() >= 2.0 * M_PI || 2.0 * M_PI - (angles.back() - angles.front()) < 0.05)
        angles.pop_back();
    while (angles.size() < 3)
        angles.push_back(angles.back() + 1.0);
    std::vector<Vec2> verts;
    const double c = std::cos(rot), s = std::sin(rot);
    for (double a : angles) {
        const double px = rx * std::cos(a), py = ry * std::sin(a);
        verts.push_back({center.x + c * px - s * py, center.y + s * px + c * py});
    }
    return ConvexPolygon(verts);
}

// Random VBF instance with synthetic per-frame powers/scores (no channel in
// the loop; exercises the solvers themselves).
struct SyntheticVbfInstance {
    std::vector<double> scores;
    std::vector<double> powers;
    double budget = 0.0;
};

inline SyntheticVbfInstance random_vbf_instance(Rng& rng, int frames) {
    SyntheticVbfInstance inst;
    double total = 0.0;
    for (int i = 0; i < frames; ++i) {
        inst.scores.push_back(rng.uniform(0.05, 1.0));
        inst.powers.push_back(rng.uniform(0.1, 1.0));
        total += inst.powers.back();
    }
    inst.budget = rng.uniform(0.2, 0.9) * total;
    return inst;
}

// Wrap a synthetic instance into a VbfProblem whose channel produces exactly
// the requested p_min values (frames placed so that gain gives p_min = power).
inline VbfProblem synthetic_problem(const SyntheticVbfInstance& inst, BudgetMode mode = BudgetMode::total_power) {
    VbfProblem problem;
    problem.mode = mode;
    problem.power_budget_w = inst.budget;
    problem.link.geom = ArrayGeometry{1, 30e9, 0.0, {0.0, 0.0}, {0.0, 1.0}};
    problem.link.pathloss = PathlossModel{1.0, 2.0};
    problem.link.budget = LinkBudget{1.0, 1.0, 1.0};
    problem.link.beam_model = BeamModel::near_field;
    // single element, beta0 = 1, alpha = 2: gain(d) = 1/d^2. payload/slot give
    // 2^(S/BT) - 1 = 1, so p_min = noise / gain = d^2. Place frame i at
    // distance sqrt(power_i).
    for (std::size_t i = 0; i < inst.scores.size(); ++i) {
        Frame f;
        f.id = static_cast<int>(i);
        f.position = {std::sqrt(inst.powers[i]), 0.0};
        f.payload_bits = 1.0;
        f.slot_duration_s = 1.0;
        f.score = inst.scores[i];
        problem.frames.push_back(f);
    }
    return problem;
}

// Max per-element phase discrepancy (radians, wrapped) between the exact
// spherical-wave channel and the planar approximation.
inline double max_phase_error(const ArrayGeometry& geom, Vec2 target, const PathlossModel& pl) {
    const ChannelVector near = los_channel_near(geom, target, pl);
    const ChannelVector far = los_channel_far(geom, target, pl);
    double worst = 0.0;
    for (std::size_t n = 0; n < near.size(); ++n)
        worst = std::max(worst, std::fabs(wrap_angle(std::arg(near.gains[n]) - std::arg(far.gains[n]))));
    return worst;
}

} // namespace neei
