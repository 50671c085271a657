#pragma once

#include "iterplan/csolve/problem.hpp"
#include "iterplan/csolve/solver.hpp"
#include "iterplan/sampler/sampled_system.hpp"

namespace iterplan::tdo {

using core::SpecClasses;
using core::SystemState;
using sampler::SampledSystem;

struct TdoInstance {
    const SampledSystem* system = nullptr;
    const SpecClasses* spec = nullptr;
    const core::TaskSiteAssignment* sites = nullptr;
    SystemState x0;
    int horizon_steps = 1;  // K
};

// Variable handles of one encoded instance.
struct TdoVars {
    // position[j][k], battery[j][k] for k = 0..K; moving[j][k] for k < K;
    // docked[i][k] for UAV i, k = 0..K (identity index into the fleet).
    std::vector<std::vector<csolve::VarId>> position;
    std::vector<std::vector<csolve::VarId>> battery;
    std::vector<std::vector<csolve::VarId>> moving;
    std::vector<std::vector<csolve::VarId>> docked;
    std::vector<std::vector<int>> hop_lb;  // per vehicle: BFS hop lower bound to each node
    std::vector<int> start_nodes;
    std::vector<int> start_levels;
};

struct EncodedTdo {
    csolve::Problem problem;
    TdoVars vars;
};

struct InfeasibleByConstructionError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Motion, docking, six-case UGV and four-case UAV (plus charge-throttle) energy
// dynamics, and coverage disjunctions for every key class. Coverage literals
// unreachable within k hops are pruned.
EncodedTdo encode_tdo(const TdoInstance& inst);

// Sound lower bound on the horizon needed to touch every key class.
int coverage_hop_lower_bound(const TdoInstance& inst);

// Branching hint: steer position variables toward uncovered classes.
csolve::SolverOptions make_tdo_options(const EncodedTdo& enc, const TdoInstance& inst,
                                       double budget_s, std::uint64_t seed);

}  // namespace iterplan::tdo
