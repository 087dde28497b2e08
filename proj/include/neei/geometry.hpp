#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

#include "neei/errors.hpp"

namespace neei {

struct Vec2 {
    double x = 0.0;
    double y = 0.0;

    Vec2 operator+(Vec2 o) const { return {x + o.x, y + o.y}; }
    Vec2 operator-(Vec2 o) const { return {x - o.x, y - o.y}; }
    Vec2 operator*(double s) const { return {x * s, y * s}; }
    Vec2& operator+=(Vec2 o) {
        x += o.x;
        y += o.y;
        return *this;
    }
    bool operator==(const Vec2&) const = default;

    double dot(Vec2 o) const { return x * o.x + y * o.y; }
    double cross(Vec2 o) const { return x * o.y - y * o.x; }
    double norm() const { return std::hypot(x, y); }
    double norm_sq() const { return x * x + y * y; }
    Vec2 perp() const { return {-y, x}; }
    Vec2 normalized() const {
        const double n = norm();
        return n > 0 ? Vec2{x / n, y / n} : Vec2{0, 0};
    }
};

inline Vec2 operator*(double s, Vec2 v) { return v * s; }

inline double distance(Vec2 a, Vec2 b) { return (a - b).norm(); }

// wrap angle to (-pi, pi]
inline double wrap_angle(double a) {
    a = std::fmod(a + M_PI, 2.0 * M_PI);
    if (a <= 0.0)
        a += 2.0 * M_PI;
    return a - M_PI;
}

// absolute angular separation in [0, pi]
inline double angle_dist(double a, double b) { return std::fabs(wrap_angle(a - b)); }

// Counter-clockwise strictly convex polygon.
class ConvexPolygon {
  public:
    ConvexPolygon() = default;

    explicit ConvexPolygon(std::vector<Vec2> vertices) : verts_(std::move(vertices)) {
        const std::size_t n = verts_.size();
        if (n < 3)
            throw ValidationError("polygon needs at least 3 vertices, got " + std::to_string(n));
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = i + 1; j < n; ++j)
                if (distance(verts_[i], verts_[j]) < 1e-9)
                    throw ValidationError("polygon has duplicate vertices");
        for (std::size_t i = 0; i < n; ++i) {
            const Vec2 e0 = verts_[(i + 1) % n] - verts_[i];
            const Vec2 e1 = verts_[(i + 2) % n] - verts_[(i + 1) % n];
            if (e0.cross(e1) <= 0.0)
                throw ValidationError("polygon is not strictly convex counter-clockwise");
        }
    }

    static ConvexPolygon axis_aligned_box(Vec2 center, double half_w, double half_h) {
        return ConvexPolygon({{center.x - half_w, center.y - half_h},
                              {center.x + half_w, center.y - half_h},
                              {center.x + half_w, center.y + half_h},
                              {center.x - half_w, center.y + half_h}});
    }

    const std::vector<Vec2>& vertices() const { return verts_; }
    std::size_t size() const { return verts_.size(); }

    ConvexPolygon translated(Vec2 d) const {
        ConvexPolygon out;
        out.verts_.reserve(verts_.size());
        for (Vec2 v : verts_)
            out.verts_.push_back(v + d);
        return out;
    }

    // rotate by theta about the origin, then translate
    ConvexPolygon transformed(Vec2 translation, double theta) const {
        const double c = std::cos(theta), s = std::sin(theta);
        ConvexPolygon out;
        out.verts_.reserve(verts_.size());
        for (Vec2 v : verts_)
            out.verts_.push_back({translation.x + c * v.x - s * v.y, translation.y + s * v.x + c * v.y});
        return out;
    }

    bool contains(Vec2 p) const {
        const std::size_t n = verts_.size();
        for (std::size_t i = 0; i < n; ++i) {
            const Vec2 e = verts_[(i + 1) % n] - verts_[i];
            if (e.cross(p - verts_[i]) < 0.0)
                return false;
        }
        return true;
    }

    double perimeter() const {
        double p = 0.0;
        for (std::size_t i = 0; i < verts_.size(); ++i)
            p += distance(verts_[i], verts_[(i + 1) % verts_.size()]);
        return p;
    }

  private:
    std::vector<Vec2> verts_;
};

struct Rect {
    double xmin = 0.0, ymin = 0.0, xmax = 0.0, ymax = 0.0;

    void validate() const {
        if (!(xmax > xmin) || !(ymax > ymin))
            throw ValidationError("region is degenerate");
    }
    bool contains(Vec2 p) const { return p.x >= xmin && p.x <= xmax && p.y >= ymin && p.y <= ymax; }
};

inline double point_segment_distance(Vec2 p, Vec2 a, Vec2 b) {
    const Vec2 ab = b - a;
    const double len_sq = ab.norm_sq();
    if (len_sq < 1e-30)
        return distance(p, a);
    const double t = std::clamp((p - a).dot(ab) / len_sq, 0.0, 1.0);
    return distance(p, a + ab * t);
}

inline bool segments_intersect(Vec2 p1, Vec2 p2, Vec2 q1, Vec2 q2) {
    const auto orient = [](Vec2 a, Vec2 b, Vec2 c) {
        const double v = (b - a).cross(c - a);
        return (v > 0.0) - (v < 0.0);
    };
    const int o1 = orient(p1, p2, q1), o2 = orient(p1, p2, q2);
    const int o3 = orient(q1, q2, p1), o4 = orient(q1, q2, p2);
    if (o1 != o2 && o3 != o4)
        return true;
    const auto on_seg = [](Vec2 a, Vec2 b, Vec2 c) {
        return std::min(a.x, b.x) <= c.x && c.x <= std::max(a.x, b.x) && std::min(a.y, b.y) <= c.y &&
               c.y <= std::max(a.y, b.y);
    };
    if (o1 == 0 && on_seg(p1, p2, q1))
        return true;
    if (o2 == 0 && on_seg(p1, p2, q2))
        return true;
    if (o3 == 0 && on_seg(q1, q2, p1))
        return true;
    if (o4 == 0 && on_seg(q1, q2, p2))
        return true;
    return false;
}

inline double segment_segment_distance(Vec2 p1, Vec2 p2, Vec2 q1, Vec2 q2) {
    if (segments_intersect(p1, p2, q1, q2))
        return 0.0;
    double d = point_segment_distance(p1, q1, q2);
    d = std::min(d, point_segment_distance(p2, q1, q2));
    d = std::min(d, point_segment_distance(q1, p1, p2));
    d = std::min(d, point_segment_distance(q2, p1, p2));
    return d;
}

// separating-axis overlap test (touching counts as overlap)
inline bool polygons_overlap(const ConvexPolygon& a, const ConvexPolygon& b) {
    const auto separated_by_edges_of = [](const ConvexPolygon& p, const ConvexPolygon& q) {
        const auto& pv = p.vertices();
        for (std::size_t i = 0; i < pv.size(); ++i) {
            const Vec2 axis = (pv[(i + 1) % pv.size()] - pv[i]).perp();
            double pmin = std::numeric_limits<double>::infinity(), pmax = -pmin;
            for (Vec2 v : p.vertices()) {
                const double t = axis.dot(v);
                pmin = std::min(pmin, t);
                pmax = std::max(pmax, t);
            }
            double qmin = std::numeric_limits<double>::infinity(), qmax = -qmin;
            for (Vec2 v : q.vertices()) {
                const double t = axis.dot(v);
                qmin = std::min(qmin, t);
                qmax = std::max(qmax, t);
            }
            if (pmax < qmin || qmax < pmin)
                return true;
        }
        return false;
    };
    return !separated_by_edges_of(a, b) && !separated_by_edges_of(b, a);
}

// Exact minimum Euclidean distance between two convex polygons; 0 iff they
// intersect or touch.
inline double min_distance(const ConvexPolygon& a, const ConvexPolygon& b) {
    if (polygons_overlap(a, b))
        return 0.0;
    const auto& av = a.vertices();
    const auto& bv = b.vertices();
    double best = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < av.size(); ++i) {
        const Vec2 a1 = av[i], a2 = av[(i + 1) % av.size()];
        for (std::size_t j = 0; j < bv.size(); ++j) {
            const Vec2 b1 = bv[j], b2 = bv[(j + 1) % bv.size()];
            best = std::min(best, segment_segment_distance(a1, a2, b1, b2));
        }
    }
    return best;
}

} // namespace neei
