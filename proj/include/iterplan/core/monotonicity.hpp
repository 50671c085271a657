#pragma once

#include <cstdint>
#include <functional>

#include "iterplan/core/ordering.hpp"
#include "iterplan/core/types.hpp"

namespace iterplan::core {

// Finite system given by an explicit state list and a transition predicate over
// state indices. All transitions share one label duration.
struct EnumerableSystem {
    std::vector<SystemState> states;
    double label_s = 0.0;
    std::function<bool(int, int)> has_transition;
};

struct MonotonicityViolation {
    int x1 = -1;
    int x1_next = -1;
    int x2 = -1;  // x2 >= x1 but (x2, l, x1_next) missing
};

struct MonotonicityReport {
    std::vector<MonotonicityViolation> violations;
    double checked_fraction = 1.0;
    bool complete = true;

    bool monotone() const { return complete && violations.empty(); }
};

struct MonotonicityOptions {
    bool parallel = false;
    std::uint64_t max_checks = UINT64_MAX;  // budget on (transition, dominating-state) pairs
};

using StateOrder = std::function<PartialOrderResult(const SystemState&, const SystemState&)>;

// Exhaustively checks that every transition (x1, l, x1') is inherited by every
// x2 >= x1. The parallel path partitions work over source states and merges
// results in index order, so reports are identical to the serial reference.
MonotonicityReport check_monotonicity(const EnumerableSystem& sys, const StateOrder& order,
                                      const MonotonicityOptions& opts = {});

}  // namespace iterplan::core
