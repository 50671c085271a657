#include "iterplan/sampler/spatial.hpp"

#include <algorithm>
#include <cmath>

namespace iterplan::sampler {

namespace {
constexpr double kPi = 3.14159265358979323846;
}

RoadNodes build_road_nodes(const RoadGeometry& road, double spacing_km,
                           const std::vector<Vec2>& depot_positions, double merge_tol_km) {
    if (spacing_km <= 0.0) throw std::invalid_argument("spacing must be positive");
    RoadNodes out;
    auto find_or_add = [&](Vec2 p, bool depot) {
        for (auto& n : out.nodes)
            if (geom::dist(n.pos_km, p) <= merge_tol_km) {
                if (depot) n.kind = NodeKind::Depot;
                return n.id;
            }
        out.nodes.push_back({static_cast<int>(out.nodes.size()), p,
                             depot ? NodeKind::Depot : NodeKind::Road});
        return out.nodes.back().id;
    };
    auto is_depot_pos = [&](Vec2 p) {
        for (Vec2 d : depot_positions)
            if (geom::dist(p, d) <= merge_tol_km) return true;
        return false;
    };

    for (const auto& br : road.branches()) {
        // Forced arc positions: endpoints plus any depot vertex on this branch.
        std::vector<double> forced{0.0, br.length()};
        for (Vec2 d : depot_positions) {
            const auto [arc, off] = br.project(d);
            if (off <= merge_tol_km) forced.push_back(arc);
        }
        std::sort(forced.begin(), forced.end());
        forced.erase(std::unique(forced.begin(), forced.end(),
                                 [&](double a, double b) { return std::abs(a - b) < merge_tol_km; }),
                     forced.end());

        int prev_id = -1;
        for (std::size_t f = 0; f + 1 < forced.size(); ++f) {
            const double s0 = forced[f];
            const double s1 = forced[f + 1];
            const int n = std::max(1, static_cast<int>(std::ceil((s1 - s0) / spacing_km - 1e-9)));
            for (int i = 0; i <= n; ++i) {
                const double s = s0 + (s1 - s0) * i / n;
                const Vec2 p = br.point_at_arc(s);
                const int id = find_or_add(p, is_depot_pos(p));
                if (prev_id >= 0 && prev_id != id) out.edges.emplace_back(prev_id, id);
                prev_id = id;
            }
        }
    }
    std::sort(out.edges.begin(), out.edges.end());
    out.edges.erase(std::unique(out.edges.begin(), out.edges.end()), out.edges.end());
    return out;
}

namespace {

Vec2 hull_centroid(const std::vector<Vec2>& hull) {
    Vec2 c{};
    for (Vec2 p : hull) c = c + p;
    return c * (1.0 / static_cast<double>(hull.size()));
}

// Lattice points of one placement, anchored at the road-hull centroid and
// clipped to the given rect and the padded road hull.
std::vector<Vec2> lattice_points(const Rect& clip_rect, double pitch_km,
                                 const std::vector<Vec2>& hull, double margin_km,
                                 const GridPlacement& place) {
    const double th = place.rotation_deg * kPi / 180.0;
    const Vec2 a1{pitch_km * std::cos(th), pitch_km * std::sin(th)};
    const Vec2 a2{pitch_km * std::cos(th + kPi / 3.0), pitch_km * std::sin(th + kPi / 3.0)};
    const Vec2 anchor = hull_centroid(hull);
    const double radius = geom::dist(clip_rect.lo, clip_rect.hi) + 2.0 * pitch_km;
    const int span = static_cast<int>(std::ceil(radius / pitch_km)) + 2;

    std::vector<Vec2> pts;
    for (int i = -span; i <= span; ++i)
        for (int j = -span; j <= span; ++j) {
            const Vec2 p = anchor + a1 * static_cast<double>(i) + a2 * static_cast<double>(j) +
                           place.offset_km;
            if (!clip_rect.contains(p)) continue;
            if (geom::distance_to_hull(hull, p) > margin_km) continue;
            pts.push_back(p);
        }
    return pts;
}

// Road nodes with a lattice point within tol, computed by inverting the lattice
// basis instead of generating points; equivalent to scanning the full lattice.
int coincidence_count(const std::vector<SpatialNode>& road_nodes, Vec2 anchor, double pitch_km,
                      const GridPlacement& place, double tol) {
    const double th = place.rotation_deg * kPi / 180.0;
    const Vec2 a1{pitch_km * std::cos(th), pitch_km * std::sin(th)};
    const Vec2 a2{pitch_km * std::cos(th + kPi / 3.0), pitch_km * std::sin(th + kPi / 3.0)};
    const double det = a1.x * a2.y - a1.y * a2.x;
    int n = 0;
    for (const auto& r : road_nodes) {
        const Vec2 d = r.pos_km - anchor - place.offset_km;
        const double fi = (d.x * a2.y - d.y * a2.x) / det;
        const double fj = (a1.x * d.y - a1.y * d.x) / det;
        bool hit = false;
        for (int i = static_cast<int>(std::floor(fi)) - 1;
             i <= static_cast<int>(std::floor(fi)) + 1 && !hit; ++i)
            for (int j = static_cast<int>(std::floor(fj)) - 1;
                 j <= static_cast<int>(std::floor(fj)) + 1 && !hit; ++j) {
                const Vec2 q = a1 * static_cast<double>(i) + a2 * static_cast<double>(j);
                if (geom::dist(q, d) <= tol) hit = true;
            }
        if (hit) ++n;
    }
    return n;
}

bool better(const GridPlacement& a, const GridPlacement& b) {
    if (a.coincidences != b.coincidences) return a.coincidences > b.coincidences;
    if (a.rotation_deg != b.rotation_deg) return a.rotation_deg < b.rotation_deg;
    if (a.offset_km.x != b.offset_km.x) return a.offset_km.x < b.offset_km.x;
    return a.offset_km.y < b.offset_km.y;
}

}  // namespace

GridPlacement orientation_search(const std::vector<SpatialNode>& road_nodes, double pitch_km,
                                 const OrientationSearchOptions& opts) {
    if (road_nodes.empty()) throw std::invalid_argument("orientation search needs road nodes");
    std::vector<Vec2> road_pos;
    road_pos.reserve(road_nodes.size());
    for (const auto& n : road_nodes) road_pos.push_back(n.pos_km);
    const auto hull = geom::convex_hull(road_pos);
    const Vec2 anchor = hull_centroid(hull);

    const int n_rot = std::max(1, static_cast<int>(std::round(60.0 / opts.rotation_step_deg)));
    const double row_h = pitch_km * std::sqrt(3.0) / 2.0;
    const int n_ox = std::max(1, static_cast<int>(std::floor(pitch_km / opts.offset_step_km)));
    const int n_oy = std::max(1, static_cast<int>(std::floor(row_h / opts.offset_step_km)));

    auto evaluate_rotation = [&](int ri) {
        GridPlacement best{};
        best.coincidences = -1;
        const double rot = ri * opts.rotation_step_deg;
        for (int xi = 0; xi < n_ox; ++xi)
            for (int yi = 0; yi < n_oy; ++yi) {
                GridPlacement cand{rot, {xi * opts.offset_step_km, yi * opts.offset_step_km}, 0};
                cand.coincidences =
                    coincidence_count(road_nodes, anchor, pitch_km, cand, opts.coincidence_tol_km);
                if (better(cand, best)) best = cand;
            }
        return best;
    };

    std::vector<GridPlacement> per_rotation(static_cast<std::size_t>(n_rot));
    if (opts.parallel) {
#ifdef _OPENMP
#pragma omp parallel for schedule(dynamic)
#endif
        for (int ri = 0; ri < n_rot; ++ri) per_rotation[static_cast<std::size_t>(ri)] = evaluate_rotation(ri);
    } else {
        for (int ri = 0; ri < n_rot; ++ri) per_rotation[static_cast<std::size_t>(ri)] = evaluate_rotation(ri);
    }
    GridPlacement best = per_rotation.front();
    for (const auto& c : per_rotation)
        if (better(c, best)) best = c;
    return best;
}

std::vector<SpatialNode> build_air_grid(const Rect& map_rect, double pitch_km,
                                        const std::vector<SpatialNode>& road_nodes,
                                        const OrientationSearchOptions& opts) {
    if (pitch_km <= 0.0) throw std::invalid_argument("pitch must be positive");
    if (road_nodes.empty()) throw std::invalid_argument("empty road hull");
    const GridPlacement place = orientation_search(road_nodes, pitch_km, opts);

    std::vector<Vec2> road_pos;
    for (const auto& n : road_nodes) road_pos.push_back(n.pos_km);
    const auto hull = geom::convex_hull(road_pos);

    // One lattice row of margin around the road hull keeps a corridor of air
    // nodes without flooding the map.
    const double margin = pitch_km * std::sqrt(3.0) / 2.0 + 1e-3;
    std::vector<SpatialNode> out = road_nodes;
    for (Vec2 p : lattice_points(map_rect, pitch_km, hull, margin, place)) {
        bool merged = false;
        for (const auto& n : out)
            if (geom::dist(n.pos_km, p) <= opts.coincidence_tol_km) {
                merged = true;
                break;
            }
        if (!merged) out.push_back({static_cast<int>(out.size()), p, NodeKind::Air});
    }
    return out;
}

}  // namespace iterplan::sampler
