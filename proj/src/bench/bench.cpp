#include "iterplan/bench/bench.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

#include "iterplan/sampler/sampled_system.hpp"

namespace iterplan::bench {

SweepConfig parse_sweep_config(std::istream& in) {
    SweepConfig cfg;
    cfg.groups.clear();
    cfg.sites.clear();
    std::string line;
    while (std::getline(in, line)) {
        const auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        std::istringstream ls(line);
        std::string key;
        if (!(ls >> key)) continue;
        if (key == "groups") {
            for (int v; ls >> v;) cfg.groups.push_back(v);
        } else if (key == "sites") {
            for (int v; ls >> v;) cfg.sites.push_back(v);
        } else if (key == "seeds") {
            ls >> cfg.seeds;
        } else if (key == "pi_budget") {
            ls >> cfg.pi_budget_s;
        } else if (key == "oracle_timeout") {
            ls >> cfg.oracle_timeout_s;
        } else if (key == "horizon_steps") {
            ls >> cfg.horizon_steps;
        } else if (key == "serial") {
            cfg.parallel = false;
        } else {
            throw std::runtime_error("unknown sweep key " + key);
        }
    }
    if (cfg.groups.empty()) cfg.groups = {2};
    if (cfg.sites.empty()) cfg.sites = {5};
    return cfg;
}

SweepConfig load_sweep_config(const std::string& path) {
    std::ifstream f(path);
    if (!f) throw std::runtime_error("cannot open sweep config " + path);
    return parse_sweep_config(f);
}

namespace {

Metrics run_one(int groups, int sites, std::uint64_t seed, const SweepConfig& cfg) {
    Metrics m;
    m.groups = groups;
    m.sites = sites;
    m.seed = seed;
    m.agents = groups * 3;
    try {
        Scenario scn = make_sweep_scenario(groups, sites, seed, cfg.pi_budget_s);
        scn.params.horizon_steps = cfg.horizon_steps;
        m.scenario = scn.name;
        const core::TaskSiteAssignment xi = scn.assignment();
        const core::SystemState x0 = scn.initial_state();
        const double horizon = cfg.horizon_steps * scn.params.gamma_d_s;

        planner::Budget budget;
        budget.total_s = cfg.pi_budget_s;
        planner::IterativeOptions iopts;
        iopts.seed = seed;
        try {
            const auto res = planner::iterative_plan(scn, xi, x0, budget, horizon, iopts);
            m.pi_plan_time_s = res.final_plan.objective_s;
            m.pi_team_plan_time_s = res.team_plan.objective_s;
            m.pi_compute_s = res.total_compute_s;
            m.pi_delta_f = res.improvement_ratio();
        } catch (const planner::NoPlanError&) {
            m.pi_timeout = true;
        }

        const auto system = sampler::build_sampled_system(scn, scn.params.gamma_d_s, nullptr,
                                                          nullptr, &x0);
        const auto spec = system.classify(xi);
        const auto oracle =
            optimal_oracle(system, spec, xi, x0, cfg.horizon_steps, cfg.oracle_timeout_s, seed);
        if (oracle.kind == OracleOutcome::Kind::Plan && oracle.proven_minimal) {
            m.oracle_timeout = false;
            m.oracle_plan_time_s = oracle.plan->objective_s;
            m.oracle_compute_s = oracle.elapsed_s;
            if (!m.pi_timeout && m.oracle_plan_time_s > 0.0)
                m.optimality_gap =
                    (m.pi_team_plan_time_s - m.oracle_plan_time_s) / m.oracle_plan_time_s;
        } else {
            m.oracle_compute_s = oracle.elapsed_s;
        }
    } catch (const std::exception& e) {
        m.error = e.what();
    }
    return m;
}

std::string quartiles(std::vector<double> v) {
    std::ostringstream os;
    os.precision(4);
    if (v.empty()) return "n/a";
    std::sort(v.begin(), v.end());
    auto q = [&](double p) {
        const double idx = p * (static_cast<double>(v.size()) - 1);
        const std::size_t lo = static_cast<std::size_t>(idx);
        const std::size_t hi = std::min(lo + 1, v.size() - 1);
        return v[lo] + (v[hi] - v[lo]) * (idx - lo);
    };
    double mean = 0;
    for (double x : v) mean += x;
    mean /= static_cast<double>(v.size());
    os << "mean " << mean << ", q1 " << q(0.25) << ", med " << q(0.5) << ", q3 " << q(0.75);
    return os.str();
}

}  // namespace

BenchReport run_bench(const SweepConfig& config) {
    BenchReport report;
    struct Job {
        int groups;
        int sites;
        std::uint64_t seed;
    };
    std::vector<Job> jobs;
    for (int g : config.groups)
        for (int s : config.sites)
            for (int seed = 0; seed < config.seeds; ++seed)
                jobs.push_back({g, s, static_cast<std::uint64_t>(seed)});

    report.rows.resize(jobs.size());
#ifdef _OPENMP
#pragma omp parallel for schedule(dynamic) if (config.parallel)
#endif
    for (int i = 0; i < static_cast<int>(jobs.size()); ++i) {
        const Job& job = jobs[static_cast<std::size_t>(i)];
        report.rows[static_cast<std::size_t>(i)] = run_one(job.groups, job.sites, job.seed, config);
    }

    std::vector<double> pi_times, pi_compute, gaps, deltas;
    int oracle_timeouts = 0, pi_timeouts = 0, errors = 0;
    double max_gap = 0.0;
    for (const auto& r : report.rows) {
        if (!r.error.empty()) {
            ++errors;
            continue;
        }
        if (r.pi_timeout) ++pi_timeouts;
        else {
            pi_times.push_back(r.pi_plan_time_s / 60.0);
            pi_compute.push_back(r.pi_compute_s);
            deltas.push_back(r.pi_delta_f);
        }
        if (r.oracle_timeout) ++oracle_timeouts;
        else if (!r.pi_timeout) {
            gaps.push_back(r.optimality_gap);
            max_gap = std::max(max_gap, r.optimality_gap);
        }
    }
    const ExternalBaselines ext;
    std::ostringstream os;
    os << "runs " << report.rows.size() << ", errors " << errors << "\n";
    os << "pi plan time min: " << quartiles(pi_times) << "\n";
    os << "pi compute s: " << quartiles(pi_compute) << "\n";
    os << "pi improvement delta_f: " << quartiles(deltas) << "\n";
    os << "pi timeouts " << pi_timeouts << ", oracle timeouts " << oracle_timeouts << "\n";
    os << "optimality gap vs exhaustive baseline: " << quartiles(gaps) << ", max "
       << max_gap << "\n";
    os << "external reference (published GA/BO baselines, same mission shape): "
       << "GA plan " << ext.ga_plan_time_min << " min / compute " << ext.ga_compute_min
       << " min; BO plan " << ext.bo_plan_time_min << " min / compute " << ext.bo_compute_min
       << " min\n";
    report.summary = os.str();
    return report;
}

std::string metrics_csv(const std::vector<Metrics>& rows) {
    std::ostringstream os;
    os.precision(10);
    os << "scenario,groups,agents,sites,seed,pi_plan_time_s,pi_team_plan_time_s,pi_compute_s,"
          "pi_delta_f,pi_timeout,oracle_plan_time_s,oracle_compute_s,oracle_timeout,"
          "optimality_gap,error\n";
    for (const auto& r : rows) {
        os << r.scenario << "," << r.groups << "," << r.agents << "," << r.sites << "," << r.seed
           << "," << r.pi_plan_time_s << "," << r.pi_team_plan_time_s << "," << r.pi_compute_s
           << "," << r.pi_delta_f << "," << (r.pi_timeout ? 1 : 0) << "," << r.oracle_plan_time_s
           << "," << r.oracle_compute_s << "," << (r.oracle_timeout ? 1 : 0) << ","
           << r.optimality_gap << "," << r.error << "\n";
    }
    return os.str();
}

void write_report(const BenchReport& report, const std::string& csv_path) {
    std::ofstream f(csv_path);
    if (!f) throw std::runtime_error("cannot write " + csv_path);
    f << metrics_csv(report.rows);
    std::ofstream s(csv_path + ".summary.txt");
    s << report.summary;
}

}  // namespace iterplan::bench
