#pragma once

#include "iterplan/scenario.hpp"

namespace iterplan::bench {

struct RandomScenarioOptions {
    int max_vehicles = 3;   // one UGV plus up to two UAVs
    int max_sites = 6;
    double budget_total_s = 10.0;
    std::uint64_t seed = 0;
};

// Desk-scale randomized mission: a short multi-branch road, one group, and a
// handful of sites placed on nodes, on edges, or inside edge corridors.
// Deterministic in the seed; always classifiable and energy-feasible at start.
Scenario make_random_scenario(const RandomScenarioOptions& opts);

// Sweep-study instance: `groups` evenly spaced (1 UGV + 2 UAV) groups along a
// straight road with depots at the ends, and `sites` task sites near the road.
Scenario make_sweep_scenario(int groups, int sites, std::uint64_t seed,
                             double budget_total_s = 60.0);

// The bundled reference mission: a Y-shaped three-depot road monitored by one
// UGV and two UAVs. `seed` perturbs start placements and initial charge.
Scenario make_reference_scenario(std::uint64_t seed = 0);

}  // namespace iterplan::bench
