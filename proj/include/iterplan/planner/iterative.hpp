#pragma once

#include "iterplan/planner/plan.hpp"
#include "iterplan/sampler/sampled_system.hpp"
#include "iterplan/scenario.hpp"

namespace iterplan::planner {

enum class SolverKind : std::uint8_t { Tdo, Ao };

struct PlanningInfeasibleError : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct NoPlanError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct StageRecord {
    std::string producer;
    double objective_s = 0.0;
    double compute_s = 0.0;
    bool accepted = false;
    bool anchor_sat = true;  // agent stage: anchor routes validated
};

struct PlanningResult {
    Plan final_plan;
    Plan team_plan;  // the first accepted (team-stage) plan
    std::vector<StageRecord> stages;
    double total_compute_s = 0.0;
    int team_horizon_steps = 0;

    double improvement_ratio() const;  // (team - final) / team
};

struct IterativeOptions {
    std::vector<SolverKind> solvers{SolverKind::Tdo, SolverKind::Ao};
    std::uint64_t seed = 0;
    std::string emit_smt_path;
    const core::Implementation* anchor = nullptr;  // incumbent carried into the sampled systems
};

// One pass of budgeted multi-solver planning: the team stage must produce a
// feasible plan, later stages are accepted only when they do not worsen the
// objective, and the loop stops when the budget runs out.
PlanningResult iterative_plan(const Scenario& scenario, const core::TaskSiteAssignment& xi,
                              const core::SystemState& x0, const Budget& budget,
                              double horizon_s, const IterativeOptions& opts = {});

// Relative plan-time improvement (f_team - f_refined) / f_team.
double improvement_delta(double team_objective_s, double refined_objective_s);

}  // namespace iterplan::planner
