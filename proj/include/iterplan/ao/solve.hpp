#pragma once

#include "iterplan/ao/instance.hpp"

namespace iterplan::ao {

struct RecursiveFeasibilityViolation : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct AoSolution {
    std::vector<int> route;            // node indices
    std::vector<double> times_s;       // timestamp at each route position
    std::vector<double> energies_kj;   // energy at each route position
    double objective_s = 0.0;          // final timestamp
    bool improved = false;             // false: keep the team plan's motion
};

// Forward-propagates times/energies along a fixed node sequence under the
// leg rules; nullopt when the sequence is infeasible.
std::optional<AoSolution> simulate_route(const AoInstance& inst, const std::vector<int>& route);

// Branch-and-bound over visit orders with charge insertions, seeded by the
// re-timed anchor route. Never returns an objective above the incumbent; the
// anchor failing to validate is a recursive-feasibility violation and throws.
AoSolution solve_ao(const AoInstance& inst, double incumbent_objective, double budget_s);

}  // namespace iterplan::ao
