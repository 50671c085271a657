#include "iterplan/ao/encode.hpp"

#include <cmath>

namespace iterplan::ao {

using csolve::c_and;
using csolve::c_eq;
using csolve::c_implies;
using csolve::c_linear;
using csolve::c_lit;
using csolve::c_or;
using csolve::ConstraintPtr;
using csolve::Rel;
using csolve::VarId;

namespace {

bool is_charge_leg(const AoInstance& inst, int i, int j) {
    const auto& a = inst.nodes[static_cast<std::size_t>(i)];
    const auto& b = inst.nodes[static_cast<std::size_t>(j)];
    return a.kind == AoNode::Kind::Rendezvous && b.kind == AoNode::Kind::Rendezvous &&
           geom::dist(a.pos_km, b.pos_km) <= 1e-9 &&
           std::abs(b.window_s - (a.window_s + inst.gamma_d_s)) <= 1e-6;
}

}  // namespace

EncodedAo encode_ao(const AoInstance& inst, int route_length,
                    std::optional<double> incumbent_objective) {
    EncodedAo enc;
    csolve::Problem& p = enc.problem;
    AoVars& v = enc.vars;
    const int n = static_cast<int>(inst.nodes.size());
    const int L = route_length;
    if (L < 1) throw csolve::EncodingError("route needs at least one slot");
    v.end_value = n;
    v.length = L;

    const double t_hi = inst.start_time_s + inst.horizon_s;
    const int slots = static_cast<int>(std::ceil(t_hi / inst.gamma_d_s)) + 1;

    for (int k = 0; k < L; ++k) {
        v.rho.push_back(p.add_int("rho_" + std::to_string(k), 0, n, k));
        v.charge_take.push_back(p.add_bool("take_" + std::to_string(k), k));
        std::vector<VarId> sel;
        for (int m = 0; m < slots; ++m)
            sel.push_back(p.add_bool("dep_" + std::to_string(k) + "_" + std::to_string(m), k));
        v.depot_slot.push_back(std::move(sel));
        v.gamma.push_back(p.add_real("t_" + std::to_string(k), 0.0, t_hi, k));
        v.eta.push_back(p.add_real("e_" + std::to_string(k), 0.0, inst.capacity_kj, k));
    }

    p.add(c_eq(v.rho[0], 0));
    p.add(c_linear({{1.0, v.gamma[0]}}, Rel::Eq, inst.start_time_s));
    p.add(c_linear({{1.0, v.eta[0]}}, Rel::Eq, inst.energy0_kj));

    for (int k = 0; k + 1 < L; ++k) {
        const VarId rk = v.rho[static_cast<std::size_t>(k)];
        const VarId rk1 = v.rho[static_cast<std::size_t>(k) + 1];
        const VarId tk = v.gamma[static_cast<std::size_t>(k)];
        const VarId tk1 = v.gamma[static_cast<std::size_t>(k) + 1];
        const VarId ek = v.eta[static_cast<std::size_t>(k)];
        const VarId ek1 = v.eta[static_cast<std::size_t>(k) + 1];
        const VarId take = v.charge_take[static_cast<std::size_t>(k)];

        // Finished routes stay finished and freeze the clocks.
        p.add(c_implies(c_eq(rk, n), c_eq(rk1, n)));
        p.add(c_implies(c_eq(rk, n), c_linear({{1.0, tk1}, {-1.0, tk}}, Rel::Eq, 0.0)));
        p.add(c_implies(c_eq(rk, n), c_linear({{1.0, ek1}, {-1.0, ek}}, Rel::Eq, 0.0)));

        for (int i = 0; i < n; ++i) {
            for (int j = 0; j <= n; ++j) {
                const ConstraintPtr leg = c_and({c_eq(rk, i), c_eq(rk1, j)});
                if (j == n) {
                    p.add(c_implies(leg, c_linear({{1.0, tk1}, {-1.0, tk}}, Rel::Eq, 0.0)));
                    p.add(c_implies(leg, c_linear({{1.0, ek1}, {-1.0, ek}}, Rel::Eq, 0.0)));
                    continue;
                }
                const auto& dst = inst.nodes[static_cast<std::size_t>(j)];
                const double phi = inst.phi_s(i, j);
                const double psi = inst.psi_kj(i, j);
                if (dst.kind == AoNode::Kind::Rendezvous) {
                    // Arrive early enough, wait parked, clock pins to the window.
                    p.add(c_implies(leg, c_linear({{1.0, tk1}}, Rel::Eq, dst.window_s)));
                    p.add(c_implies(leg, c_linear({{1.0, tk}}, Rel::Le, dst.window_s - phi)));
                    if (is_charge_leg(inst, i, j)) {
                        p.add(c_implies(c_and({leg, c_lit(take)}),
                                        c_linear({{1.0, ek}}, Rel::Le, inst.charge_cap_kj)));
                        p.add(c_implies(c_and({leg, c_lit(take)}),
                                        c_linear({{1.0, ek1}, {-1.0, ek}}, Rel::Eq,
                                                 inst.charge_step_kj)));
                        p.add(c_implies(c_and({leg, c_lit(take, false)}),
                                        c_linear({{1.0, ek1}, {-1.0, ek}}, Rel::Eq, 0.0)));
                    } else {
                        p.add(c_implies(leg,
                                        c_linear({{1.0, ek1}, {-1.0, ek}}, Rel::Eq, -psi)));
                    }
                } else if (dst.kind == AoNode::Kind::Depot) {
                    // Wait for a step multiple, then charge for one step.
                    std::vector<ConstraintPtr> some_slot;
                    for (int m = 0;
                         m < static_cast<int>(v.depot_slot[static_cast<std::size_t>(k)].size());
                         ++m) {
                        const VarId sel = v.depot_slot[static_cast<std::size_t>(k)]
                                                      [static_cast<std::size_t>(m)];
                        some_slot.push_back(c_lit(sel));
                        const double start = m * inst.gamma_d_s;
                        const ConstraintPtr cond = c_and({leg, c_lit(sel)});
                        p.add(c_implies(cond, c_linear({{1.0, tk}}, Rel::Le, start - phi)));
                        p.add(c_implies(cond, c_linear({{1.0, tk1}}, Rel::Eq,
                                                       start + inst.gamma_d_s)));
                    }
                    p.add(c_implies(leg, c_or(std::move(some_slot))));
                    p.add(c_implies(c_and({leg, c_lit(take)}),
                                    c_linear({{1.0, ek}}, Rel::Le, inst.charge_cap_kj + psi)));
                    p.add(c_implies(c_and({leg, c_lit(take)}),
                                    c_linear({{1.0, ek1}, {-1.0, ek}}, Rel::Eq,
                                             inst.charge_step_kj - psi)));
                    p.add(c_implies(c_and({leg, c_lit(take, false)}),
                                    c_linear({{1.0, ek1}, {-1.0, ek}}, Rel::Eq, -psi)));
                    p.add(c_implies(leg, c_linear({{1.0, ek}}, Rel::Ge, psi)));
                } else {
                    // Plain flight leg: exact transit, no loitering.
                    p.add(c_implies(leg,
                                    c_linear({{1.0, tk1}, {-1.0, tk}}, Rel::Eq, phi)));
                    p.add(c_implies(leg, c_linear({{1.0, ek1}, {-1.0, ek}}, Rel::Eq, -psi)));
                }
            }
        }
    }

    // Every owned site is visited somewhere along the route.
    for (int visit : inst.visit_nodes()) {
        std::vector<ConstraintPtr> lits;
        for (int k = 0; k < L; ++k) lits.push_back(c_eq(v.rho[static_cast<std::size_t>(k)], visit));
        p.add(c_or(std::move(lits)));
    }

    if (incumbent_objective)
        p.add(c_linear({{1.0, v.gamma[static_cast<std::size_t>(L) - 1]}}, Rel::Le,
                       *incumbent_objective));

    return enc;
}

void pin_route(EncodedAo& enc, const std::vector<int>& route) {
    for (std::size_t k = 0; k < enc.vars.rho.size(); ++k) {
        const int value = k < route.size() ? route[k] : enc.vars.end_value;
        enc.problem.add(c_eq(enc.vars.rho[k], value));
    }
}

}  // namespace iterplan::ao
