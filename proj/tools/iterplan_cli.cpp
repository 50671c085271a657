#include <CLI11.hpp>
#include <fstream>
#include <iostream>

#include "iterplan/bench/bench.hpp"
#include "iterplan/bench/plan_io.hpp"
#include "iterplan/bench/scenario_io.hpp"
#include "iterplan/planner/execute.hpp"

namespace {

constexpr int kOk = 0;
constexpr int kInfeasible = 2;
constexpr int kTimeoutNoPlan = 3;
constexpr int kInputError = 4;

using namespace iterplan;

int cmd_plan(const std::string& scenario_path, double budget_override,
             const std::string& emit_smt, const std::string& out_path) {
    Scenario scn = bench::load_scenario(scenario_path);
    if (budget_override > 0) scn.params.budget_total_s = budget_override;
    planner::Budget budget;
    budget.total_s = scn.params.budget_total_s;
    budget.per_solver_s = scn.params.budget_tdo_s;
    planner::IterativeOptions opts;
    opts.seed = scn.params.seed;
    opts.emit_smt_path = emit_smt;
    const double horizon = scn.params.horizon_steps * scn.params.gamma_d_s;
    try {
        const auto res = planner::iterative_plan(scn, scn.assignment(), scn.initial_state(),
                                                 budget, horizon, opts);
        std::cout << "plan objective_s " << res.final_plan.objective_s << " producer "
                  << res.final_plan.producer << "\n";
        std::cout << "team objective_s " << res.team_plan.objective_s << " horizon_steps "
                  << res.team_horizon_steps << "\n";
        std::cout << "improvement delta_f " << res.improvement_ratio() << " compute_s "
                  << res.total_compute_s << "\n";
        if (!out_path.empty()) bench::save_plan(res.final_plan, out_path);
        return kOk;
    } catch (const planner::PlanningInfeasibleError& e) {
        std::cerr << "infeasible: " << e.what() << "\n";
        return kInfeasible;
    } catch (const planner::NoPlanError& e) {
        std::cerr << "timeout without a plan: " << e.what() << "\n";
        return kTimeoutNoPlan;
    }
}

int cmd_execute(const std::string& scenario_path, int steps, double step_budget,
                const std::string& log_path) {
    Scenario scn = bench::load_scenario(scenario_path);
    const int max_steps = steps > 0 ? steps : scn.params.horizon_steps;
    const double budget = step_budget > 0 ? step_budget : scn.params.step_budget_s;
    planner::ExecuteOptions opts;
    opts.seed = scn.params.seed;
    try {
        const auto res = planner::shrinking_horizon_execute(
            scn, scn.assignment(), scn.initial_state(), max_steps, budget, scn.params.step_s,
            opts);
        std::cout << "executed steps " << res.steps_executed << " mission_time_s "
                  << res.mission_time_s << " remaining_sites " << res.remaining_sites.size()
                  << "\n";
        if (!log_path.empty()) {
            std::ofstream f(log_path);
            f << "step,compute_s,producer,objective_before_s,objective_after_s,delta_f,"
                 "fallback,retired\n";
            for (const auto& r : res.log.records) {
                f << r.step << "," << r.compute_s << "," << r.producer << ","
                  << r.objective_before_s << "," << r.objective_after_s << "," << r.delta_f << ","
                  << (r.fallback ? 1 : 0) << ",";
                for (std::size_t i = 0; i < r.retired_sites.size(); ++i)
                    f << (i ? ";" : "") << r.retired_sites[i];
                f << "\n";
            }
        }
        return res.remaining_sites.empty() ? kOk : kTimeoutNoPlan;
    } catch (const planner::PlanningInfeasibleError& e) {
        std::cerr << "infeasible: " << e.what() << "\n";
        return kInfeasible;
    } catch (const planner::NoPlanError& e) {
        std::cerr << "timeout without a plan: " << e.what() << "\n";
        return kTimeoutNoPlan;
    }
}

int cmd_bench(const std::string& config_path, const std::string& out_path) {
    const auto cfg = bench::load_sweep_config(config_path);
    const auto report = bench::run_bench(cfg);
    if (!out_path.empty()) bench::write_report(report, out_path);
    else std::cout << bench::metrics_csv(report.rows);
    std::cout << report.summary;
    return kOk;
}

int cmd_oracle(const std::string& scenario_path, int k_max, double timeout) {
    Scenario scn = bench::load_scenario(scenario_path);
    const auto x0 = scn.initial_state();
    const auto system = sampler::build_sampled_system(scn, scn.params.gamma_d_s, nullptr, nullptr,
                                                      &x0);
    const auto spec = system.classify(scn.assignment());
    const int cap = k_max > 0 ? k_max : scn.params.horizon_steps;
    const auto out = bench::optimal_oracle(system, spec, scn.assignment(), x0, cap, timeout,
                                           scn.params.seed);
    switch (out.kind) {
        case bench::OracleOutcome::Kind::Plan:
            std::cout << "oracle objective_s " << out.plan->objective_s << " horizon "
                      << out.horizon << (out.proven_minimal ? " minimal" : " unproven")
                      << " compute_s " << out.elapsed_s << "\n";
            return kOk;
        case bench::OracleOutcome::Kind::Infeasible:
            std::cerr << "infeasible within horizon " << cap << "\n";
            return kInfeasible;
        case bench::OracleOutcome::Kind::Timeout:
            std::cerr << "oracle timeout; proven infeasible through horizon " << out.best_bound
                      << "\n";
            return kTimeoutNoPlan;
    }
    return kInputError;
}

int cmd_validate(const std::string& scenario_path, const std::string& plan_path) {
    const Scenario scn = bench::load_scenario(scenario_path);
    const auto plan = bench::load_plan(plan_path, scn);

    vehicle::OracleOptions oopts;
    oopts.depot_positions = scn.depot_positions();
    const vehicle::ContinuousOracle oracle(scn.core_fleet(), vehicle::EnergyModel{},
                                           scn.road_geometry(), oopts);
    const auto& segs = plan.implementation.segments();
    for (std::size_t i = 0; i < segs.size(); ++i) {
        std::string why;
        if (!oracle.check(segs[i].from, segs[i].duration_s, segs[i].to, &why)) {
            std::cerr << "segment " << i << " invalid: " << why << "\n";
            return kInfeasible;
        }
    }
    const auto xi = scn.assignment();
    for (std::size_t c = 0; c < xi.classes.size(); ++c) {
        bool hit = false;
        for (double t : core::sweep_times(plan.implementation, 1.0))
            if (xi.classes[c].contains(core::output_behavior(plan.implementation, t))) {
                hit = true;
                break;
            }
        if (!hit) {
            std::cerr << "site " << c << " never visited\n";
            return kInfeasible;
        }
    }
    std::cout << "plan valid; objective_s " << plan.objective_s << "\n";
    return kOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"energy-aware multi-vehicle route planning"};
    app.require_subcommand(1);

    std::string scenario_path, plan_path, out_path, log_path, emit_smt, config_path;
    double budget = 0, step_budget = 0, timeout = 300;
    int steps = 0, k_max = 0;

    auto* plan = app.add_subcommand("plan", "compute a plan for a scenario");
    plan->add_option("scenario", scenario_path)->required();
    plan->add_option("--budget", budget, "compute budget in seconds");
    plan->add_option("--emit-smt", emit_smt, "dump the team-stage encoding as SMT-LIB2");
    plan->add_option("--out", out_path, "write the plan file here");

    auto* exec = app.add_subcommand("execute", "shrinking-horizon execution with replanning");
    exec->add_option("scenario", scenario_path)->required();
    exec->add_option("--steps", steps, "number of execution steps");
    exec->add_option("--step-budget", step_budget, "compute budget per step in seconds");
    exec->add_option("--log", log_path, "write the execution log CSV here");

    auto* bench_cmd = app.add_subcommand("bench", "run a sweep study");
    bench_cmd->add_option("config", config_path)->required();
    bench_cmd->add_option("--out", out_path, "write metrics CSV here");

    auto* oracle_cmd = app.add_subcommand("oracle", "exhaustive minimum-horizon baseline");
    oracle_cmd->add_option("scenario", scenario_path)->required();
    oracle_cmd->add_option("--kmax", k_max, "horizon cap in steps");
    oracle_cmd->add_option("--timeout", timeout, "oracle timeout in seconds");

    auto* validate = app.add_subcommand("validate", "check a plan file against a scenario");
    validate->add_option("scenario", scenario_path)->required();
    validate->add_option("plan", plan_path)->required();

    CLI11_PARSE(app, argc, argv);

    try {
        if (app.got_subcommand(plan)) return cmd_plan(scenario_path, budget, emit_smt, out_path);
        if (app.got_subcommand(exec)) return cmd_execute(scenario_path, steps, step_budget, log_path);
        if (app.got_subcommand(bench_cmd)) return cmd_bench(config_path, out_path);
        if (app.got_subcommand(oracle_cmd)) return cmd_oracle(scenario_path, k_max, timeout);
        if (app.got_subcommand(validate)) return cmd_validate(scenario_path, plan_path);
    } catch (const ScenarioError& e) {
        std::cerr << "scenario error: " << e.what() << "\n";
        return kInputError;
    } catch (const bench::PlanFileError& e) {
        std::cerr << "plan file error: " << e.what() << "\n";
        return kInputError;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kInputError;
    }
    return kInputError;
}
