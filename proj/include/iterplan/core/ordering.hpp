#pragma once

#include "iterplan/core/types.hpp"

namespace iterplan::core {

enum class PartialOrderResult : std::uint8_t {
    GreaterOrEqual,
    LessOrEqual,
    Equal,
    Incomparable,
};

// Ranks state a against state b. GreaterOrEqual means a dominates: identical
// outputs, every vehicle at least as much energy, and a timestamp no later.
// Output mismatch or a conflicting energy/time direction is Incomparable —
// there is no tie-break.
PartialOrderResult compare_states(const SystemState& a, const SystemState& b,
                                  double pos_tol_km = 1e-9, double energy_tol_kj = 1e-9,
                                  double time_tol_s = 1e-9);

}  // namespace iterplan::core
