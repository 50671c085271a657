#pragma once

#include "iterplan/ao/solve.hpp"
#include "iterplan/planner/plan.hpp"

namespace iterplan::ao {

struct AgentOutcome {
    std::size_t agent = 0;
    AoInstance instance;
    AoSolution solution;
};

// Composes refined per-UAV routes with the frozen UGV motion. Pad capacity is
// re-checked per charge window; on conflict the later-arriving agent reverts to
// its team-plan motion. The merged implementation is truncated once every key
// class has been covered; the objective is that completion time.
planner::Plan merge_agent_plans(const planner::Plan& team_plan,
                                const std::vector<AgentOutcome>& outcomes,
                                const sampler::SampledSystem& system,
                                const core::SpecClasses& spec,
                                const core::TaskSiteAssignment& sites);

}  // namespace iterplan::ao
