#pragma once

#include "iterplan/planner/plan.hpp"
#include "iterplan/tdo/encode.hpp"

namespace iterplan::tdo {

struct DecodeIntegrityError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Reconstructs the team trajectory and its straight-line constant-speed
// implementation from a verified model; trailing steps that add no coverage
// are trimmed and task-site pass-through times become segment boundaries.
planner::Plan decode_tdo(const EncodedTdo& enc, const TdoInstance& inst,
                         const csolve::Model& model);

struct TdoOutcome {
    enum class Kind : std::uint8_t { Plan, Infeasible, Timeout };
    Kind kind = Kind::Timeout;
    std::optional<planner::Plan> plan;
    int horizon = 0;
    double elapsed_s = 0.0;
    csolve::SolveStats stats;
};

struct TdoOptions {
    std::uint64_t seed = 0;
    std::string emit_smt_path;  // when set, the last encoding is dumped here
};

// Iterative deepening over the horizon: the first Sat wins; Unsat at the
// horizon cap with time left means infeasible.
TdoOutcome solve_tdo(const SampledSystem& system, const SpecClasses& spec,
                     const core::TaskSiteAssignment& sites, const SystemState& x0, int k_max,
                     double budget_s, const TdoOptions& opts = {});

}  // namespace iterplan::tdo
