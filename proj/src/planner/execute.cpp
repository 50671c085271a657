#include "iterplan/planner/execute.hpp"

#include <chrono>

namespace iterplan::planner {

namespace {

// Original class indices whose region the piece's output trace enters.
std::vector<std::size_t> retired_classes(const core::Implementation& piece,
                                         const core::TaskSiteAssignment& xi) {
    std::vector<std::size_t> hit;
    if (piece.empty()) return hit;
    const auto times = core::sweep_times(piece, 1.0);
    for (std::size_t c = 0; c < xi.classes.size(); ++c) {
        for (double t : times) {
            if (xi.classes[c].contains(core::output_behavior(piece, t))) {
                hit.push_back(c);
                break;
            }
        }
    }
    return hit;
}

}  // namespace

ExecutionResult shrinking_horizon_execute(const Scenario& scenario,
                                          const core::TaskSiteAssignment& xi0,
                                          const core::SystemState& x0, int max_steps,
                                          double step_budget_s, double step_s,
                                          const ExecuteOptions& opts) {
    if (!(step_budget_s < step_s))
        throw std::invalid_argument("per-step compute budget must stay below the step length");

    ExecutionResult result;
    core::TaskSiteAssignment xi = xi0;
    std::vector<int> active;  // original indices of classes still open
    for (int c = 0; c < static_cast<int>(xi0.classes.size()); ++c) active.push_back(c);

    core::SystemState x = x0;
    std::optional<core::Implementation> incumbent;
    double incumbent_objective = std::numeric_limits<double>::infinity();
    std::vector<core::Implementation::Segment> executed;
    core::Implementation::ChargeFn charge_fn;

    for (int k = 1; k <= max_steps && !xi.empty(); ++k) {
        const double horizon = (max_steps - k + 1) * step_s;
        ExecutionRecord rec;
        rec.step = k;

        std::optional<Plan> accepted;
        const auto t0 = std::chrono::steady_clock::now();
        try {
            IterativeOptions io;
            io.solvers = opts.solvers;
            io.seed = opts.seed + static_cast<std::uint64_t>(k);
            io.anchor = incumbent ? &*incumbent : nullptr;
            Budget budget;
            budget.total_s = step_budget_s;
            PlanningResult replan = iterative_plan(scenario, xi, x, budget, horizon, io);
            rec.objective_before_s = replan.team_plan.objective_s;
            if (k == 1 || replan.final_plan.objective_s <= incumbent_objective) {
                accepted = std::move(replan.final_plan);
                rec.producer = accepted->producer;
                rec.objective_after_s = accepted->objective_s;
                rec.delta_f = improvement_delta(rec.objective_before_s, rec.objective_after_s);
            } else {
                rec.producer = "incumbent";
                rec.objective_after_s = incumbent_objective;
                rec.delta_f = 0.0;
            }
        } catch (const std::exception&) {
            if (!incumbent) throw;  // nothing to fall back to
            rec.producer = "incumbent";
            rec.fallback = true;
            rec.objective_before_s = incumbent_objective;
            rec.objective_after_s = incumbent_objective;
        }
        rec.compute_s = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
                            .count();

        core::Implementation to_run = accepted ? accepted->implementation : *incumbent;
        if (accepted) incumbent_objective = accepted->objective_s;
        if (!charge_fn) charge_fn = to_run.charge_fn();

        const double run = std::min(step_s, to_run.total_duration());
        core::Implementation piece = to_run;
        piece.truncate(run);
        for (const auto& seg : piece.segments()) executed.push_back(seg);
        x = piece.final_state();

        // Retire what the executed trace visited.
        const auto hits = retired_classes(piece, xi);
        for (auto it = hits.rbegin(); it != hits.rend(); ++it) {
            rec.retired_sites.push_back(active[*it]);
            xi.classes.erase(xi.classes.begin() + static_cast<std::ptrdiff_t>(*it));
            active.erase(active.begin() + static_cast<std::ptrdiff_t>(*it));
        }
        std::sort(rec.retired_sites.begin(), rec.retired_sites.end());
        result.log.records.push_back(std::move(rec));
        result.steps_executed = k;

        if (run >= to_run.total_duration() - 1e-9) {
            incumbent.reset();
            incumbent_objective = std::numeric_limits<double>::infinity();
            if (!xi.empty()) continue;  // plan exhausted with work left; replan fresh
            break;
        }
        incumbent = to_run.after(run);
    }

    result.remaining_sites = active;
    if (!executed.empty()) result.executed = core::Implementation(std::move(executed), charge_fn);
    result.mission_time_s = executed.empty() ? x0.time_s : result.executed.final_state().time_s;
    return result;
}

}  // namespace iterplan::planner
