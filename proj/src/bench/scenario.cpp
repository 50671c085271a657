#include "iterplan/scenario.hpp"

#include "iterplan/vehicle/energy.hpp"

namespace iterplan {

geom::RoadGeometry Scenario::road_geometry() const {
    std::vector<geom::Polyline> branches;
    for (const auto& b : road_branches) branches.emplace_back(b);
    return geom::RoadGeometry(std::move(branches));
}

std::vector<geom::Vec2> Scenario::depot_positions() const {
    std::vector<geom::Vec2> out;
    for (auto [bi, vi] : depots)
        out.push_back(road_branches.at(static_cast<std::size_t>(bi)).at(static_cast<std::size_t>(vi)));
    return out;
}

core::Fleet Scenario::core_fleet() const {
    const vehicle::EnergyModel model;
    core::Fleet f;
    for (const auto& v : fleet)
        f.members.push_back({v.cls, model.capacity(v.cls), v.group});
    return f;
}

core::TaskSiteAssignment Scenario::assignment() const {
    core::TaskSiteAssignment xi;
    for (geom::Vec2 s : sites) xi.classes.push_back({s, params.site_radius_km});
    return xi;
}

core::SystemState Scenario::initial_state() const {
    const core::Fleet f = core_fleet();
    core::SystemState x;
    x.time_s = 0.0;
    for (std::size_t j = 0; j < fleet.size(); ++j) {
        core::VehicleState v;
        v.pos_km = fleet[j].start_km;
        v.energy_kj = fleet[j].energy0_kj;
        v.flag = f.is_ugv(j) ? core::StatusFlag::UgvNoDock : core::StatusFlag::UavFree;
        x.vehicles.push_back(v);
    }
    // Dock UAVs that start on their group's UGV, respecting the two-pad limit.
    for (std::size_t g = 0; g < fleet.size(); ++g) {
        if (!f.is_ugv(g)) continue;
        int docked = 0;
        for (std::size_t j : f.uavs_of_group(fleet[g].group)) {
            if (docked >= 2) break;
            if (geom::dist(x.vehicles[j].pos_km, x.vehicles[g].pos_km) <= 1e-3) {
                x.vehicles[j].flag = core::StatusFlag::UavDocked;
                ++docked;
            }
        }
        x.vehicles[g].flag = static_cast<core::StatusFlag>(docked);
    }
    return x;
}

void Scenario::validate() const {
    const vehicle::EnergyModel model;
    if (road_branches.empty()) throw ScenarioError("road", "no road branches");
    for (std::size_t b = 0; b < road_branches.size(); ++b)
        if (road_branches[b].size() < 2)
            throw ScenarioError("road[" + std::to_string(b) + "]", "branch needs two vertices");
    const auto road = road_geometry();
    if (depots.empty()) throw ScenarioError("depot", "at least one depot required");
    for (std::size_t d = 0; d < depots.size(); ++d) {
        const auto [bi, vi] = depots[d];
        if (bi < 0 || static_cast<std::size_t>(bi) >= road_branches.size())
            throw ScenarioError("depot[" + std::to_string(d) + "]", "branch index out of range");
        if (vi < 0 || static_cast<std::size_t>(vi) >= road_branches[static_cast<std::size_t>(bi)].size())
            throw ScenarioError("depot[" + std::to_string(d) + "]", "vertex index out of range");
    }
    if (fleet.empty()) throw ScenarioError("vehicle", "fleet is empty");
    for (std::size_t j = 0; j < fleet.size(); ++j) {
        const auto& v = fleet[j];
        const std::string fld = "vehicle[" + std::to_string(j) + "]";
        if (!map_rect.contains(v.start_km)) throw ScenarioError(fld, "start outside the map");
        if (v.energy0_kj < 0.0 || v.energy0_kj > model.capacity(v.cls) + 1e-9)
            throw ScenarioError(fld, "initial energy outside [0, capacity]");
        if (v.cls == core::VehicleClass::Ugv && road.distance_to_road(v.start_km) > 1.5e-3)
            throw ScenarioError(fld, "UGV start off the road");
        if (v.cls == core::VehicleClass::Uav && core_fleet().host_ugv(j) < 0)
            throw ScenarioError(fld, "UAV has no group UGV");
    }
    for (std::size_t s = 0; s < sites.size(); ++s)
        if (!map_rect.contains(sites[s]))
            throw ScenarioError("site[" + std::to_string(s) + "]", "outside the map");
    const auto& p = params;
    if (p.gamma_d_s <= 0 || p.spacing_road_km <= 0 || p.pitch_air_km <= 0)
        throw ScenarioError("params", "discretization values must be positive");
    if (p.spacing_road_km * 1000.0 / p.gamma_d_s > model.v_g_max + 1e-9)
        throw ScenarioError("params.spacing_road", "implied UGV cruise speed above limit");
    if (p.pitch_air_km * 1000.0 / p.gamma_d_s > model.v_a_max + 1e-9)
        throw ScenarioError("params.pitch_air", "implied UAV cruise speed above limit");
    if (p.levels_uav < 1 || p.levels_ugv < 1)
        throw ScenarioError("params.levels", "level counts must be positive");
    if (p.budget_total_s <= 0) throw ScenarioError("params.budget_total", "must be positive");
    if (p.budget_tdo_s && (*p.budget_tdo_s <= 0 || *p.budget_tdo_s > p.budget_total_s))
        throw ScenarioError("params.budget_tdo", "must be in (0, budget_total]");
}

}  // namespace iterplan
