#pragma once

#include <iosfwd>

#include "iterplan/bench/generator.hpp"
#include "iterplan/bench/oracle.hpp"
#include "iterplan/planner/iterative.hpp"

namespace iterplan::bench {

struct SweepConfig {
    std::vector<int> groups{2};
    std::vector<int> sites{5};
    int seeds = 10;
    double pi_budget_s = 60.0;
    double oracle_timeout_s = 300.0;
    int horizon_steps = 12;
    bool parallel = true;
};

SweepConfig parse_sweep_config(std::istream& in);
SweepConfig load_sweep_config(const std::string& path);

struct Metrics {
    std::string scenario;
    int groups = 0;
    int agents = 0;
    int sites = 0;
    std::uint64_t seed = 0;
    double pi_plan_time_s = 0.0;       // refined objective
    double pi_team_plan_time_s = 0.0;  // team-stage objective (same discretization as the oracle)
    double pi_compute_s = 0.0;
    double pi_delta_f = 0.0;
    bool pi_timeout = false;
    double oracle_plan_time_s = 0.0;
    double oracle_compute_s = 0.0;
    bool oracle_timeout = true;
    double optimality_gap = 0.0;  // (pi_team - oracle) / oracle, when the oracle finished
    std::string error;
};

struct BenchReport {
    std::vector<Metrics> rows;
    std::string summary;  // means, interquartile ranges, timeout counts, max gap
};

// Externally reported baseline plan/compute times for the same mission shape
// (genetic-algorithm and Bayesian-optimization planners); shown in summaries
// as reference lines only.
struct ExternalBaselines {
    double ga_plan_time_min = 225.0;
    double ga_compute_min = 94.0;
    double bo_plan_time_min = 249.0;
    double bo_compute_min = 15.0;
};

BenchReport run_bench(const SweepConfig& config);

std::string metrics_csv(const std::vector<Metrics>& rows);
void write_report(const BenchReport& report, const std::string& csv_path);

}  // namespace iterplan::bench
