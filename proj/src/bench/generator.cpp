#include "iterplan/bench/generator.hpp"

#include <cmath>
#include <random>

#include "iterplan/sampler/sampled_system.hpp"
#include "iterplan/vehicle/energy.hpp"

namespace iterplan::bench {

namespace {

constexpr double kPi = 3.14159265358979323846;

geom::Vec2 polar(geom::Vec2 origin, double angle_rad, double r) {
    return {origin.x + r * std::cos(angle_rad), origin.y + r * std::sin(angle_rad)};
}

}  // namespace

Scenario make_random_scenario(const RandomScenarioOptions& opts) {
    std::mt19937_64 rng(opts.seed * 0x9e3779b97f4a7c15ULL + 0xd1b54a32d192ed03ULL);
    auto uniform = [&](double lo, double hi) {
        return std::uniform_real_distribution<double>(lo, hi)(rng);
    };
    auto pick = [&](int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng); };

    Scenario scn;
    scn.name = "random_" + std::to_string(opts.seed);
    scn.map_rect = {{0, 0}, {20, 20}};
    scn.params.budget_total_s = opts.budget_total_s;
    scn.params.horizon_steps = 20;
    scn.params.seed = opts.seed;

    const geom::Vec2 junction{uniform(8.0, 12.0), uniform(8.0, 12.0)};
    const int branches = pick(1, 3);
    const double base_angle = uniform(0.0, 2.0 * kPi);
    for (int b = 0; b < branches; ++b) {
        const double angle = base_angle + b * (2.0 * kPi / branches) + uniform(-0.3, 0.3);
        const double len = uniform(2.4, 4.3);
        scn.road_branches.push_back({junction, polar(junction, angle, len)});
        scn.depots.emplace_back(b, 1);  // depot at each branch tip
    }

    const vehicle::EnergyModel model;
    Scenario::VehicleSpec ugv;
    ugv.cls = core::VehicleClass::Ugv;
    ugv.start_km = junction;
    ugv.energy0_kj = model.b_ugv_kj;
    ugv.group = 0;
    scn.fleet.push_back(ugv);
    const int uavs = std::min(opts.max_vehicles - 1, pick(1, 2));
    for (int u = 0; u < uavs; ++u) {
        Scenario::VehicleSpec uav;
        uav.cls = core::VehicleClass::Uav;
        uav.start_km = junction;  // begins docked
        uav.energy0_kj = uniform(0.6, 1.0) * model.b_uav_kj;
        uav.group = 0;
        scn.fleet.push_back(uav);
    }

    // Sites come from the discretization itself: node hits, mid-edge crossings,
    // and corridor points, all guaranteed classifiable.
    const sampler::SampledSystem sys = sampler::build_sampled_system(scn, scn.params.gamma_d_s);
    const int n_sites = pick(1, opts.max_sites);
    for (int s = 0; s < n_sites; ++s) {
        const int style = pick(0, 9);
        if (style < 6 || sys.n_grid < 2) {
            const int node = pick(0, sys.n_grid - 1);
            scn.sites.push_back(sys.node_pos(node));
        } else {
            // A point strictly inside an air edge, at most the class radius off it.
            const int a = pick(0, sys.n_grid - 1);
            const auto& adj = sys.adj_air[static_cast<std::size_t>(a)];
            if (adj.empty()) {
                scn.sites.push_back(sys.node_pos(a));
                continue;
            }
            const int b = adj[static_cast<std::size_t>(pick(0, static_cast<int>(adj.size()) - 1))];
            const double t = uniform(0.35, 0.65);
            geom::Vec2 p = geom::lerp(sys.node_pos(a), sys.node_pos(b), t);
            const geom::Vec2 dir = sys.node_pos(b) - sys.node_pos(a);
            const double len = geom::norm(dir);
            if (len > 1e-9 && style >= 8) {
                const geom::Vec2 normal{-dir.y / len, dir.x / len};
                p = p + normal * uniform(-0.0008, 0.0008);
            }
            scn.sites.push_back(p);
        }
    }
    scn.validate();
    return scn;
}

Scenario make_sweep_scenario(int groups, int sites, std::uint64_t seed, double budget_total_s) {
    if (groups < 1 || sites < 1) throw std::invalid_argument("groups and sites must be positive");
    std::mt19937_64 rng(seed * 0x2545f4914f6cdd1dULL + 0x9e3779b97f4a7c15ULL);
    auto uniform = [&](double lo, double hi) {
        return std::uniform_real_distribution<double>(lo, hi)(rng);
    };

    Scenario scn;
    scn.name = "sweep_g" + std::to_string(groups) + "_s" + std::to_string(sites) + "_" +
               std::to_string(seed);
    scn.map_rect = {{0, 0}, {20, 20}};
    scn.params.budget_total_s = budget_total_s;
    scn.params.horizon_steps = 12;
    scn.params.seed = seed;

    const double length = 6.0;
    const double y = 10.0;
    scn.road_branches.push_back({{4.0, y}, {4.0 + length, y}});
    scn.depots.emplace_back(0, 0);
    scn.depots.emplace_back(0, 1);

    const vehicle::EnergyModel model;
    for (int g = 0; g < groups; ++g) {
        // Node positions are multiples of the 1.2 km spacing along the road.
        const int slot = static_cast<int>(std::llround(
            (length / 1.2) * (groups == 1 ? 0.5 : static_cast<double>(g) / (groups - 1))));
        const geom::Vec2 start{4.0 + 1.2 * slot, y};
        Scenario::VehicleSpec ugv;
        ugv.cls = core::VehicleClass::Ugv;
        ugv.start_km = start;
        ugv.energy0_kj = model.b_ugv_kj;
        ugv.group = g;
        scn.fleet.push_back(ugv);
        for (int u = 0; u < 2; ++u) {
            Scenario::VehicleSpec uav;
            uav.cls = core::VehicleClass::Uav;
            uav.start_km = start;
            uav.energy0_kj = model.b_uav_kj;
            uav.group = g;
            scn.fleet.push_back(uav);
        }
    }
    for (int s = 0; s < sites; ++s) {
        const double x = 4.0 + 1.2 * std::llround(uniform(0.0, length / 1.2));
        const double off = uniform(-1.3, 1.3);
        scn.sites.push_back({x, y + off});
    }
    scn.validate();
    return scn;
}

Scenario make_reference_scenario(std::uint64_t seed) {
    std::mt19937_64 rng(seed * 0x9e3779b97f4a7c15ULL + 17);
    auto uniform = [&](double lo, double hi) {
        return std::uniform_real_distribution<double>(lo, hi)(rng);
    };

    Scenario scn;
    scn.name = "reference_y_road";
    scn.map_rect = {{0, 0}, {20, 20}};
    scn.params.horizon_steps = 20;
    scn.params.seed = seed;

    const geom::Vec2 junction{10.0, 10.0};
    const double reach = 4.8 / std::sqrt(2.0);
    scn.road_branches.push_back({junction, {junction.x - reach, junction.y + reach}});
    scn.road_branches.push_back({junction, {junction.x - reach, junction.y - reach}});
    scn.road_branches.push_back({junction, {junction.x + 4.8, junction.y}});
    scn.depots.emplace_back(0, 1);
    scn.depots.emplace_back(1, 1);
    scn.depots.emplace_back(2, 1);

    const vehicle::EnergyModel model;
    Scenario::VehicleSpec ugv;
    ugv.cls = core::VehicleClass::Ugv;
    ugv.start_km = junction;
    ugv.energy0_kj = model.b_ugv_kj;
    ugv.group = 0;
    scn.fleet.push_back(ugv);
    for (int u = 0; u < 2; ++u) {
        Scenario::VehicleSpec uav;
        uav.cls = core::VehicleClass::Uav;
        uav.start_km = junction;
        uav.energy0_kj = (seed == 0 ? 1.0 : uniform(0.7, 1.0)) * model.b_uav_kj;
        uav.group = 0;
        scn.fleet.push_back(uav);
    }

    // Monitor the whole road: every road node is a task site.
    const sampler::SampledSystem sys = sampler::build_sampled_system(scn, scn.params.gamma_d_s);
    for (int n = 0; n < sys.n_road; ++n) scn.sites.push_back(sys.node_pos(n));

    if (seed != 0) {
        // Shift the team start to a random road node.
        const int start = std::uniform_int_distribution<int>(0, sys.n_road - 1)(rng);
        for (auto& v : scn.fleet) v.start_km = sys.node_pos(start);
    }
    scn.validate();
    return scn;
}

}  // namespace iterplan::bench
