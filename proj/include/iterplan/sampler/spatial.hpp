#pragma once

#include "iterplan/geom/geometry.hpp"

namespace iterplan::sampler {

using geom::RoadGeometry;
using geom::Rect;
using geom::Vec2;

enum class NodeKind : std::uint8_t { Road, Air, Depot };

struct SpatialNode {
    int id = -1;
    Vec2 pos_km;
    NodeKind kind = NodeKind::Air;

    bool on_road() const { return kind != NodeKind::Air; }
};

struct RoadNodes {
    std::vector<SpatialNode> nodes;
    std::vector<std::pair<int, int>> edges;  // consecutive along-road pairs (undirected)
};

// Arc-length-uniform subdivision keeping every branch endpoint and depot vertex;
// consecutive gaps never exceed the spacing. Nodes shared by branches are merged.
RoadNodes build_road_nodes(const RoadGeometry& road, double spacing_km,
                           const std::vector<Vec2>& depot_positions, double merge_tol_km = 1e-3);

struct GridPlacement {
    double rotation_deg = 0.0;
    Vec2 offset_km;
    int coincidences = 0;
};

struct OrientationSearchOptions {
    double rotation_step_deg = 1.0;
    double offset_step_km = 0.05;       // 50 m
    double coincidence_tol_km = 0.05;   // lattice point counts when this close to a road node
    bool parallel = true;
};

// Best triangular-lattice placement: maximize road-node coincidences, ties by
// smallest rotation then lexicographic offset. Serial and parallel paths return
// identical placements.
GridPlacement orientation_search(const std::vector<SpatialNode>& road_nodes, double pitch_km,
                                 const OrientationSearchOptions& opts = {});

// Triangular lattice clipped to the road hull (padded by one pitch) and the map,
// with lattice points merged into coincident road nodes. Road nodes come first
// and keep their ids; the result always contains all of them.
std::vector<SpatialNode> build_air_grid(const Rect& map_rect, double pitch_km,
                                        const std::vector<SpatialNode>& road_nodes,
                                        const OrientationSearchOptions& opts = {});

}  // namespace iterplan::sampler
