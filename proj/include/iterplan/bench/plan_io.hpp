#pragma once

#include <iosfwd>

#include "iterplan/planner/plan.hpp"
#include "iterplan/scenario.hpp"

namespace iterplan::bench {

struct PlanFileError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Text plan file: a shared timestamp grid with one waypoint/energy/flag row per
// agent per timestamp. Straight-line motion between rows.
std::string format_plan(const planner::Plan& plan);
void save_plan(const planner::Plan& plan, const std::string& path);
planner::Plan parse_plan(std::istream& in, const Scenario& scenario);
planner::Plan load_plan(const std::string& path, const Scenario& scenario);

}  // namespace iterplan::bench
