#pragma once

#include "iterplan/ao/instance.hpp"
#include "iterplan/csolve/problem.hpp"

namespace iterplan::ao {

struct AoVars {
    std::vector<csolve::VarId> rho;    // route positions, domain [0, nodes] (last = End)
    std::vector<csolve::VarId> gamma;  // timestamps (Real)
    std::vector<csolve::VarId> eta;    // energies (Real)
    std::vector<csolve::VarId> charge_take;  // per step: take the charge gain of this leg
    std::vector<std::vector<csolve::VarId>> depot_slot;  // per step: chosen start multiple
    int end_value = 0;  // rho value meaning "route finished"
    int length = 0;
};

struct EncodedAo {
    csolve::Problem problem;
    AoVars vars;
};

// Route/time/energy recurrences: exact transit times at free-flight speed,
// waiting allowed only into timed windows, depot charge slack of one step
// starting on a step multiple, charge gains only from below the taper cap,
// every owned site visited, and optionally an incumbent objective bound.
EncodedAo encode_ao(const AoInstance& inst, int route_length,
                    std::optional<double> incumbent_objective = std::nullopt);

// Constraints pinning the route variables to a concrete node sequence.
void pin_route(EncodedAo& enc, const std::vector<int>& route);

}  // namespace iterplan::ao
