#include "iterplan/planner/iterative.hpp"

#include <chrono>

#include "iterplan/ao/merge.hpp"
#include "iterplan/ao/solve.hpp"
#include "iterplan/tdo/solve.hpp"

#ifdef _OPENMP
#include <omp.h>
#endif

namespace iterplan::planner {

double PlanningResult::improvement_ratio() const {
    return improvement_delta(team_plan.objective_s, final_plan.objective_s);
}

double improvement_delta(double team_objective_s, double refined_objective_s) {
    if (team_objective_s <= 0.0)
        throw std::invalid_argument("improvement ratio undefined for a zero objective");
    return (team_objective_s - refined_objective_s) / team_objective_s;
}

PlanningResult iterative_plan(const Scenario& scenario, const core::TaskSiteAssignment& xi,
                              const core::SystemState& x0, const Budget& budget,
                              double horizon_s, const IterativeOptions& opts) {
    budget.check();
    const auto t_start = std::chrono::steady_clock::now();
    auto elapsed = [&] {
        return std::chrono::duration<double>(std::chrono::steady_clock::now() - t_start).count();
    };

    const double gamma_d = scenario.params.gamma_d_s;
    const int k_max = std::max(1, static_cast<int>(std::floor(horizon_s / gamma_d + 1e-9)));

    PlanningResult result;

    // Team stage over a fresh sampled system (the start state injected when it
    // sits off the grid).
    const sampler::SampledSystem system =
        sampler::build_sampled_system(scenario, gamma_d, opts.anchor, opts.anchor ? &xi : nullptr,
                                      &x0);
    const core::SpecClasses spec = system.classify(xi);

    bool have_incumbent = false;
    for (SolverKind kind : opts.solvers) {
        const double remaining = budget.total_s - elapsed();
        if (remaining <= 0.0) break;

        if (kind == SolverKind::Tdo) {
            const double tdo_share = budget.per_solver_s
                                         ? *budget.per_solver_s
                                         : (opts.solvers.size() > 1 ? 0.4 * budget.total_s
                                                                    : budget.total_s);
            const double tdo_budget = std::min(remaining, tdo_share);
            tdo::TdoOptions topts;
            topts.seed = opts.seed;
            topts.emit_smt_path = opts.emit_smt_path;
            const auto before = elapsed();
            const tdo::TdoOutcome outcome =
                tdo::solve_tdo(system, spec, xi, x0, k_max, tdo_budget, topts);
            StageRecord rec;
            rec.producer = "tdo";
            rec.compute_s = elapsed() - before;
            if (outcome.kind == tdo::TdoOutcome::Kind::Infeasible)
                throw PlanningInfeasibleError("team stage proved the task infeasible");
            if (outcome.kind == tdo::TdoOutcome::Kind::Timeout && !have_incumbent)
                throw NoPlanError("team stage ran out of budget without a plan");
            if (outcome.kind == tdo::TdoOutcome::Kind::Plan) {
                rec.objective_s = outcome.plan->objective_s;
                rec.accepted = !have_incumbent ||
                               outcome.plan->objective_s <= result.final_plan.objective_s;
                if (rec.accepted) {
                    result.final_plan = *outcome.plan;
                    if (!have_incumbent) result.team_plan = *outcome.plan;
                    have_incumbent = true;
                    result.team_horizon_steps = outcome.horizon;
                }
            }
            result.stages.push_back(std::move(rec));
            continue;
        }

        // Agent stage needs an incumbent team plan.
        if (!have_incumbent) continue;
        const auto before = elapsed();
        const double ao_budget = budget.total_s - before;
        if (ao_budget <= 0.0) break;

        std::vector<std::size_t> agents;
        for (std::size_t j = 0; j < system.fleet.size(); ++j)
            if (system.fleet.is_uav(j)) agents.push_back(j);

        std::vector<ao::AgentOutcome> outcomes(agents.size());
        std::vector<std::string> failures(agents.size());
        const Plan incumbent = result.final_plan;
#ifdef _OPENMP
#pragma omp parallel for schedule(dynamic)
#endif
        for (int ai = 0; ai < static_cast<int>(agents.size()); ++ai) {
            auto& oc = outcomes[static_cast<std::size_t>(ai)];
            oc.agent = agents[static_cast<std::size_t>(ai)];
            try {
                oc.instance = ao::extract_agent_subproblem(incumbent, oc.agent, system, spec, xi);
                oc.solution = ao::solve_ao(oc.instance, incumbent.objective_s, ao_budget);
            } catch (const std::exception& e) {
                failures[static_cast<std::size_t>(ai)] = e.what();
            }
        }
        StageRecord rec;
        rec.producer = "ao";
        for (const auto& f : failures)
            if (!f.empty()) {
                rec.anchor_sat = false;
                rec.producer += " [" + f + "]";
            }
        if (rec.anchor_sat) {
            Plan merged = ao::merge_agent_plans(incumbent, outcomes, system, spec, xi);
            rec.objective_s = merged.objective_s;
            rec.accepted = merged.objective_s <= result.final_plan.objective_s;
            if (rec.accepted) result.final_plan = std::move(merged);
        }
        rec.compute_s = elapsed() - before;
        result.stages.push_back(std::move(rec));
    }

    if (!have_incumbent) throw NoPlanError("no solver produced a plan");
    result.total_compute_s = elapsed();
    return result;
}

}  // namespace iterplan::planner
