#pragma once

#include "iterplan/tdo/solve.hpp"

namespace iterplan::bench {

struct OracleOutcome {
    enum class Kind : std::uint8_t { Plan, Timeout, Infeasible };
    Kind kind = Kind::Timeout;
    std::optional<planner::Plan> plan;
    int horizon = 0;          // minimal feasible horizon when proven
    bool proven_minimal = false;
    int best_bound = 0;       // largest horizon proven infeasible
    double elapsed_s = 0.0;
};

// Exhaustive minimum-horizon baseline over the same discretization: deepen the
// horizon, requiring an infeasibility proof below the returned plan.
OracleOutcome optimal_oracle(const sampler::SampledSystem& system, const core::SpecClasses& spec,
                             const core::TaskSiteAssignment& sites, const core::SystemState& x0,
                             int k_max, double timeout_s, std::uint64_t seed = 0);

}  // namespace iterplan::bench
