#pragma once

#include <string>

#include "iterplan/core/spec.hpp"
#include "iterplan/core/trajectory.hpp"

namespace iterplan::planner {

// A specification-satisfying trajectory with its continuous realization.
// The objective is the timestamp of the final state.
struct Plan {
    core::Trajectory trajectory;
    core::Implementation implementation;
    double objective_s = 0.0;
    std::string producer;
};

struct Budget {
    double total_s = 300.0;
    std::optional<double> per_solver_s;

    void check() const {
        if (total_s <= 0.0) throw std::invalid_argument("budget must be positive");
        if (per_solver_s && (*per_solver_s <= 0.0 || *per_solver_s > total_s))
            throw std::invalid_argument("per-solver budget outside (0, total]");
    }
};

struct ExecutionRecord {
    int step = 0;
    double compute_s = 0.0;
    std::string producer;
    double objective_before_s = 0.0;  // team-stage objective at this step
    double objective_after_s = 0.0;   // accepted objective at this step
    double delta_f = 0.0;
    std::vector<int> retired_sites;
    bool fallback = false;  // incumbent kept because replanning failed
};

struct ExecutionLog {
    std::vector<ExecutionRecord> records;
};

}  // namespace iterplan::planner
