#pragma once

#include <optional>
#include <string>

#include "iterplan/core/spec.hpp"
#include "iterplan/core/types.hpp"
#include "iterplan/geom/geometry.hpp"

namespace iterplan {

struct ScenarioError : std::runtime_error {
    std::string field;
    ScenarioError(std::string field_path, const std::string& msg)
        : std::runtime_error(field_path + ": " + msg), field(std::move(field_path)) {}
};

// Declarative mission description: map, road branches, depots, fleet, sites,
// and discretization/budget parameters.
struct Scenario {
    std::string name = "scenario";
    geom::Rect map_rect{{0, 0}, {20, 20}};
    std::vector<std::vector<geom::Vec2>> road_branches;
    std::vector<std::pair<int, int>> depots;  // (branch index, vertex index)

    struct VehicleSpec {
        core::VehicleClass cls = core::VehicleClass::Uav;
        geom::Vec2 start_km;
        double energy0_kj = 0.0;
        int group = 0;
    };
    std::vector<VehicleSpec> fleet;
    std::vector<geom::Vec2> sites;

    struct Params {
        double gamma_d_s = 300.0;
        double spacing_road_km = 1.2;
        double pitch_air_km = 1.5;
        int levels_uav = 20;
        int levels_ugv = 100;
        double budget_total_s = 300.0;
        std::optional<double> budget_tdo_s;  // default split: 40% team stage
        double step_budget_s = 300.0;
        double step_s = 300.0;
        int horizon_steps = 40;
        double site_radius_km = 1e-3;
        std::uint64_t seed = 0;
    } params;

    geom::RoadGeometry road_geometry() const;
    std::vector<geom::Vec2> depot_positions() const;
    core::Fleet core_fleet() const;
    core::TaskSiteAssignment assignment() const;

    // Initial system state; a UAV starting on its group UGV begins docked.
    core::SystemState initial_state() const;

    // Throws ScenarioError naming the offending field.
    void validate() const;
};

}  // namespace iterplan
