#pragma once

#include <cmath>
#include <cstddef>
#include <limits>
#include <stdexcept>
#include <vector>

namespace iterplan::geom {

struct Vec2 {
    double x = 0.0;
    double y = 0.0;

    Vec2 operator+(Vec2 o) const { return {x + o.x, y + o.y}; }
    Vec2 operator-(Vec2 o) const { return {x - o.x, y - o.y}; }
    Vec2 operator*(double s) const { return {x * s, y * s}; }
    bool operator==(const Vec2&) const = default;
};

inline double dot(Vec2 a, Vec2 b) { return a.x * b.x + a.y * b.y; }
inline double norm(Vec2 a) { return std::sqrt(dot(a, a)); }
inline double dist(Vec2 a, Vec2 b) { return norm(a - b); }

inline Vec2 lerp(Vec2 a, Vec2 b, double t) { return {a.x + (b.x - a.x) * t, a.y + (b.y - a.y) * t}; }

// Parameter in [0,1] of the point on segment [a,b] closest to p.
inline double closest_param_on_segment(Vec2 p, Vec2 a, Vec2 b) {
    const Vec2 ab = b - a;
    const double len2 = dot(ab, ab);
    if (len2 <= 0.0) return 0.0;
    const double t = dot(p - a, ab) / len2;
    return t < 0.0 ? 0.0 : (t > 1.0 ? 1.0 : t);
}

inline double point_segment_distance(Vec2 p, Vec2 a, Vec2 b) {
    return dist(p, lerp(a, b, closest_param_on_segment(p, a, b)));
}

struct Rect {
    Vec2 lo;
    Vec2 hi;
    bool contains(Vec2 p) const { return p.x >= lo.x && p.x <= hi.x && p.y >= lo.y && p.y <= hi.y; }
};

// Open polyline; arc positions are measured from the first vertex.
class Polyline {
public:
    Polyline() = default;
    explicit Polyline(std::vector<Vec2> vertices) : vertices_(std::move(vertices)) {
        if (vertices_.size() < 2) throw std::invalid_argument("polyline needs at least 2 vertices");
        cumulative_.resize(vertices_.size(), 0.0);
        for (std::size_t i = 1; i < vertices_.size(); ++i)
            cumulative_[i] = cumulative_[i - 1] + dist(vertices_[i - 1], vertices_[i]);
        if (length() <= 0.0) throw std::invalid_argument("degenerate polyline");
    }

    const std::vector<Vec2>& vertices() const { return vertices_; }
    double length() const { return cumulative_.back(); }
    double arc_of_vertex(std::size_t i) const { return cumulative_.at(i); }

    Vec2 point_at_arc(double s) const {
        if (s <= 0.0) return vertices_.front();
        if (s >= length()) return vertices_.back();
        std::size_t i = 1;
        while (cumulative_[i] < s) ++i;
        const double seg = cumulative_[i] - cumulative_[i - 1];
        const double t = seg > 0.0 ? (s - cumulative_[i - 1]) / seg : 0.0;
        return lerp(vertices_[i - 1], vertices_[i], t);
    }

    // Arc position of the closest point of the polyline to p, plus the distance.
    std::pair<double, double> project(Vec2 p) const {
        double best_arc = 0.0;
        double best_d = std::numeric_limits<double>::infinity();
        for (std::size_t i = 1; i < vertices_.size(); ++i) {
            const double t = closest_param_on_segment(p, vertices_[i - 1], vertices_[i]);
            const Vec2 q = lerp(vertices_[i - 1], vertices_[i], t);
            const double d = dist(p, q);
            if (d < best_d) {
                best_d = d;
                best_arc = cumulative_[i - 1] + t * dist(vertices_[i - 1], vertices_[i]);
            }
        }
        return {best_arc, best_d};
    }

private:
    std::vector<Vec2> vertices_;
    std::vector<double> cumulative_;
};

// Monotone-chain convex hull; returns CCW polygon without repeated last point.
std::vector<Vec2> convex_hull(std::vector<Vec2> points);

// Signed-free distance: 0 when p is inside (or on) the hull, else distance to its boundary.
double distance_to_hull(const std::vector<Vec2>& hull, Vec2 p);

// A road made of polyline branches. Branch endpoints lying within merge_tol of
// each other are treated as the same junction, so shortest along-road distances
// route through junctions.
class RoadGeometry {
public:
    RoadGeometry() = default;
    explicit RoadGeometry(std::vector<Polyline> branches, double merge_tol_km = 1e-6);

    const std::vector<Polyline>& branches() const { return branches_; }
    bool empty() const { return branches_.empty(); }

    // Distance from p to the nearest road point.
    double distance_to_road(Vec2 p) const;

    // Shortest along-road distance between two (near-)road points. Both points
    // are first projected onto the road.
    double along_road_distance(Vec2 a, Vec2 b) const;

private:
    struct Projection {
        std::size_t branch;
        double arc;
        double off_road;
    };
    Projection project(Vec2 p) const;

    std::vector<Polyline> branches_;
    // Junction graph over branch endpoints: node ids per (branch, end).
    std::vector<std::pair<int, int>> endpoint_nodes_;  // per branch: node id of (front, back)
    int node_count_ = 0;
};

}  // namespace iterplan::geom
