#include "iterplan/geom/geometry.hpp"

#include <algorithm>
#include <queue>

namespace iterplan::geom {

std::vector<Vec2> convex_hull(std::vector<Vec2> pts) {
    std::sort(pts.begin(), pts.end(), [](Vec2 a, Vec2 b) { return a.x < b.x || (a.x == b.x && a.y < b.y); });
    pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
    const std::size_t n = pts.size();
    if (n < 3) return pts;
    auto cross = [](Vec2 o, Vec2 a, Vec2 b) {
        return (a.x - o.x) * (b.y - o.y) - (a.y - o.y) * (b.x - o.x);
    };
    std::vector<Vec2> hull(2 * n);
    std::size_t k = 0;
    for (std::size_t i = 0; i < n; ++i) {
        while (k >= 2 && cross(hull[k - 2], hull[k - 1], pts[i]) <= 0) --k;
        hull[k++] = pts[i];
    }
    for (std::size_t i = n - 1, t = k + 1; i-- > 0;) {
        while (k >= t && cross(hull[k - 2], hull[k - 1], pts[i]) <= 0) --k;
        hull[k++] = pts[i];
    }
    hull.resize(k - 1);
    return hull;
}

double distance_to_hull(const std::vector<Vec2>& hull, Vec2 p) {
    if (hull.empty()) return std::numeric_limits<double>::infinity();
    if (hull.size() == 1) return dist(hull[0], p);
    if (hull.size() == 2) return point_segment_distance(p, hull[0], hull[1]);
    bool inside = true;
    double best = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < hull.size(); ++i) {
        const Vec2 a = hull[i];
        const Vec2 b = hull[(i + 1) % hull.size()];
        const double cr = (b.x - a.x) * (p.y - a.y) - (b.y - a.y) * (p.x - a.x);
        if (cr < 0) inside = false;  // hull is CCW
        best = std::min(best, point_segment_distance(p, a, b));
    }
    return inside ? 0.0 : best;
}

RoadGeometry::RoadGeometry(std::vector<Polyline> branches, double merge_tol_km)
    : branches_(std::move(branches)) {
    if (branches_.empty()) throw std::invalid_argument("road needs at least one branch");
    std::vector<Vec2> node_pos;
    auto node_for = [&](Vec2 p) {
        for (int i = 0; i < static_cast<int>(node_pos.size()); ++i)
            if (dist(node_pos[i], p) <= merge_tol_km) return i;
        node_pos.push_back(p);
        return static_cast<int>(node_pos.size()) - 1;
    };
    for (const auto& br : branches_) {
        const int a = node_for(br.vertices().front());
        const int b = node_for(br.vertices().back());
        endpoint_nodes_.emplace_back(a, b);
    }
    node_count_ = static_cast<int>(node_pos.size());
}

double RoadGeometry::distance_to_road(Vec2 p) const {
    double best = std::numeric_limits<double>::infinity();
    for (const auto& br : branches_) best = std::min(best, br.project(p).second);
    return best;
}

RoadGeometry::Projection RoadGeometry::project(Vec2 p) const {
    Projection best{0, 0.0, std::numeric_limits<double>::infinity()};
    for (std::size_t i = 0; i < branches_.size(); ++i) {
        const auto [arc, d] = branches_[i].project(p);
        if (d < best.off_road) best = {i, arc, d};
    }
    return best;
}

double RoadGeometry::along_road_distance(Vec2 a, Vec2 b) const {
    const Projection pa = project(a);
    const Projection pb = project(b);
    // Graph nodes: junctions 0..node_count_-1, then A = node_count_, B = node_count_+1.
    const int node_a = node_count_;
    const int node_b = node_count_ + 1;
    struct Edge {
        int to;
        double w;
    };
    std::vector<std::vector<Edge>> adj(node_count_ + 2);
    auto add = [&](int u, int v, double w) {
        adj[u].push_back({v, w});
        adj[v].push_back({u, w});
    };
    for (std::size_t i = 0; i < branches_.size(); ++i) {
        const auto [fr, bk] = endpoint_nodes_[i];
        const double len = branches_[i].length();
        add(fr, bk, len);
        if (pa.branch == i) {
            add(node_a, fr, pa.arc);
            add(node_a, bk, len - pa.arc);
        }
        if (pb.branch == i) {
            add(node_b, fr, pb.arc);
            add(node_b, bk, len - pb.arc);
        }
        if (pa.branch == i && pb.branch == i) add(node_a, node_b, std::abs(pa.arc - pb.arc));
    }
    std::vector<double> d(adj.size(), std::numeric_limits<double>::infinity());
    using Item = std::pair<double, int>;
    std::priority_queue<Item, std::vector<Item>, std::greater<>> pq;
    d[node_a] = 0.0;
    pq.emplace(0.0, node_a);
    while (!pq.empty()) {
        auto [du, u] = pq.top();
        pq.pop();
        if (du > d[u]) continue;
        if (u == node_b) break;
        for (const Edge& e : adj[u]) {
            if (du + e.w < d[e.to]) {
                d[e.to] = du + e.w;
                pq.emplace(d[e.to], e.to);
            }
        }
    }
    return d[node_b];
}

}  // namespace iterplan::geom
