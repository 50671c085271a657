#pragma once

#include <optional>

#include "iterplan/core/monotonicity.hpp"
#include "iterplan/core/spec.hpp"
#include "iterplan/sampler/quantize.hpp"
#include "iterplan/sampler/spatial.hpp"
#include "iterplan/scenario.hpp"
#include "iterplan/vehicle/oracle.hpp"

namespace iterplan::sampler {

using core::SystemState;
using core::VehicleClass;

struct FeasibilityInjectionError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Discrete solver-facing state space: road and air nodes, one-step adjacency,
// quantized batteries, plus any anchor states injected for recursive
// feasibility. Node ids: [0, n_road) road, [n_road, n_grid) air lattice,
// [n_grid, nodes.size()) injected.
class SampledSystem {
public:
    std::vector<SpatialNode> nodes;
    int n_road = 0;
    int n_grid = 0;
    std::vector<int> depot_ids;
    std::vector<std::vector<int>> adj_road;
    std::vector<std::vector<int>> adj_air;
    double gamma_d_s = 300.0;
    double cruise_v_a = 5.0;
    double cruise_v_g = 4.0;
    QuantizedEnergy levels;
    core::Fleet fleet;
    vehicle::EnergyModel model;
    geom::RoadGeometry road;
    std::vector<geom::Vec2> depot_positions;
    std::vector<SystemState> injected_states;  // time-ordered anchor samples

    int node_near(geom::Vec2 p, double tol_km = 1e-6) const;
    bool is_road_node(int id) const { return id >= 0 && id < n_road; }
    bool is_injected_node(int id) const { return id >= n_grid; }
    bool is_depot_node(int id) const;
    geom::Vec2 node_pos(int id) const { return nodes.at(static_cast<std::size_t>(id)).pos_km; }

    double unit_kj(VehicleClass cls) const {
        return cls == VehicleClass::Ugv ? levels.unit_g_kj : levels.unit_a_kj;
    }
    int max_level(VehicleClass cls) const {
        return cls == VehicleClass::Ugv ? levels.b_max_g : levels.b_max_a;
    }
    int level_floor(VehicleClass cls, double e_kj) const;

    // Node domain of a vehicle (road subset for the rover, everything else for UAVs).
    bool node_allowed(VehicleClass cls, int id) const;
    const std::vector<int>& adjacency(VehicleClass cls, int id) const;

    // Per-vehicle node ids of a state, if every vehicle sits on a node.
    std::optional<std::vector<int>> nodes_of_state(const SystemState& x, double tol_km = 1e-6) const;

    bool is_sampled_state(const SystemState& x) const;

    vehicle::ContinuousOracle continuous_oracle(bool check_time = true) const;

    // Membership relation: both states sampled and the step physically valid.
    core::TransitionOracle member_relation() const;

    // Strict mirror of the quantized level dynamics used by the discrete stage.
    core::TransitionOracle quantized_relation() const;

    core::SampledGeometry geometry() const;
    core::SpecClasses classify(const core::TaskSiteAssignment& xi) const;

    // Trajectory induced by the injected anchor samples (empty when no anchor).
    core::Trajectory anchor_trajectory() const;

    // Finite time-projected view for exhaustive monotonicity checks.
    core::EnumerableSystem enumerable_view() const;

    void finalize();  // builds caches; called by the builder

private:
    std::vector<geom::Vec2> position_cache_;
    std::vector<core::SpecClasses::Edge> edge_cache_;
    std::vector<geom::Vec2> injected_position_cache_;
};

// Composes road nodes, the air grid, and energy quantization. When an anchor
// implementation is given, its states at segment boundaries and at task-site
// hit times are injected so the anchor trajectory exists in the system. An
// off-grid start state may be injected the same way.
SampledSystem build_sampled_system(const Scenario& scenario, double gamma_d_s,
                                   const core::Implementation* anchor = nullptr,
                                   const core::TaskSiteAssignment* anchor_sites = nullptr,
                                   const core::SystemState* start = nullptr);

}  // namespace iterplan::sampler
