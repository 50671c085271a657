#pragma once

#include "iterplan/planner/iterative.hpp"

namespace iterplan::planner {

struct ExecutionResult {
    core::Implementation executed;  // stitched motion actually flown
    ExecutionLog log;
    std::vector<int> remaining_sites;  // original class indices never satisfied
    double mission_time_s = 0.0;
    int steps_executed = 0;
};

struct ExecuteOptions {
    std::uint64_t seed = 0;
    std::vector<SolverKind> solvers{SolverKind::Tdo, SolverKind::Ao};
};

// Replans over the shrinking remaining horizon, executes one step of the
// accepted plan, retires the task sites the executed trace entered, and keeps
// the shifted incumbent when replanning fails. Requires step_budget < step_s.
ExecutionResult shrinking_horizon_execute(const Scenario& scenario,
                                          const core::TaskSiteAssignment& xi0,
                                          const core::SystemState& x0, int max_steps,
                                          double step_budget_s, double step_s,
                                          const ExecuteOptions& opts = {});

}  // namespace iterplan::planner
