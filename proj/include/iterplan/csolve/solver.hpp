#pragma once

#include <chrono>
#include <functional>

#include "iterplan/csolve/problem.hpp"

namespace iterplan::csolve {

// Read access to the finite assignment built so far, for value heuristics.
class AssignmentView {
public:
    virtual ~AssignmentView() = default;
    virtual std::optional<long long> value_of(VarId id) const = 0;
};

struct SolverOptions {
    double budget_s = 60.0;
    std::uint64_t seed = 0;  // recorded for reproducibility; the search is deterministic
    // Reorders candidate values (initially ascending) for a finite variable.
    std::function<void(const Var&, const AssignmentView&, std::vector<long long>&)> value_heuristic;
};

// Finite-domain propagation + depth-first search; branches variables by
// (time_rank, id), values ascending unless a heuristic reorders them. Reals are
// fixed at the leaves by interval narrowing over the residual linear atoms.
// A Sat model is re-verified exactly before being returned.
SolveResult check_sat(const Problem& problem, const SolverOptions& opts = {});

}  // namespace iterplan::csolve
