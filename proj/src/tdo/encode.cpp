#include "iterplan/tdo/encode.hpp"

#include <algorithm>
#include <queue>

namespace iterplan::tdo {

using csolve::c_and;
using csolve::c_eq;
using csolve::c_false;
using csolve::c_implies;
using csolve::c_linear;
using csolve::c_lit;
using csolve::c_not;
using csolve::c_or;
using csolve::c_true;
using csolve::ConstraintPtr;
using csolve::LinearTerm;
using csolve::Rel;
using csolve::VarId;

namespace {

constexpr int kUnreachable = 1 << 20;

std::vector<int> bfs_hops(const SampledSystem& sys, core::VehicleClass cls, int start) {
    std::vector<int> dist(sys.nodes.size(), kUnreachable);
    std::queue<int> q;
    dist[static_cast<std::size_t>(start)] = 0;
    q.push(start);
    while (!q.empty()) {
        const int u = q.front();
        q.pop();
        for (int v : sys.adjacency(cls, u)) {
            if (dist[static_cast<std::size_t>(v)] > dist[static_cast<std::size_t>(u)] + 1) {
                dist[static_cast<std::size_t>(v)] = dist[static_cast<std::size_t>(u)] + 1;
                q.push(v);
            }
        }
    }
    return dist;
}

// Difference equality: a - b = rhs.
ConstraintPtr var_diff_eq(VarId a, VarId b, double rhs) {
    return c_linear({{1.0, a}, {-1.0, b}}, Rel::Eq, rhs);
}

}  // namespace

EncodedTdo encode_tdo(const TdoInstance& inst) {
    const SampledSystem& sys = *inst.system;
    const core::Fleet& fleet = sys.fleet;
    const int K = inst.horizon_steps;
    if (K < 1) throw csolve::EncodingError("horizon must be at least one step");

    EncodedTdo enc;
    csolve::Problem& p = enc.problem;
    TdoVars& vars = enc.vars;
    const std::size_t J = fleet.size();
    vars.position.resize(J);
    vars.battery.resize(J);
    vars.moving.resize(J);
    vars.docked.resize(J);

    // Initial nodes/levels from x0.
    const auto ids = sys.nodes_of_state(inst.x0, 1e-6);
    if (!ids) throw csolve::EncodingError("initial state is not on sampled nodes");
    for (std::size_t j = 0; j < J; ++j) {
        vars.start_nodes.push_back((*ids)[j]);
        vars.start_levels.push_back(
            sys.level_floor(fleet.members[j].cls, inst.x0.vehicles[j].energy_kj));
    }

    const int n_all = static_cast<int>(sys.nodes.size());
    for (int k = 0; k <= K; ++k) {
        for (std::size_t j = 0; j < J; ++j) {
            const bool ugv = fleet.is_ugv(j);
            const long long hi = k == 0 ? n_all - 1 : (ugv ? sys.n_road - 1 : sys.n_grid - 1);
            vars.position[j].push_back(
                p.add_int("p_" + std::to_string(j) + "_" + std::to_string(k), 0, hi, k));
        }
        for (std::size_t j = 0; j < J; ++j)
            if (fleet.is_uav(j))
                vars.docked[j].push_back(
                    p.add_bool("s_" + std::to_string(j) + "_" + std::to_string(k), k));
        if (k < K)
            for (std::size_t j = 0; j < J; ++j)
                vars.moving[j].push_back(
                    p.add_bool("v_" + std::to_string(j) + "_" + std::to_string(k), k));
        for (std::size_t j = 0; j < J; ++j)
            vars.battery[j].push_back(p.add_int("b_" + std::to_string(j) + "_" + std::to_string(k),
                                                0, sys.max_level(fleet.members[j].cls), k));
    }

    // Initial pinning.
    for (std::size_t j = 0; j < J; ++j) {
        p.add(c_eq(vars.position[j][0], vars.start_nodes[j]));
        p.add(c_eq(vars.battery[j][0], vars.start_levels[j]));
        if (fleet.is_uav(j))
            p.add(inst.x0.vehicles[j].flag == core::StatusFlag::UavDocked
                      ? c_lit(vars.docked[j][0])
                      : c_lit(vars.docked[j][0], false));
    }

    // Hop lower bounds (coverage pruning and search guidance).
    vars.hop_lb.resize(J);
    for (std::size_t j = 0; j < J; ++j)
        vars.hop_lb[j] = bfs_hops(sys, fleet.members[j].cls, vars.start_nodes[j]);

    // Motion constraints.
    for (int k = 0; k < K; ++k) {
        for (std::size_t j = 0; j < J; ++j) {
            const bool ugv = fleet.is_ugv(j);
            const VarId pk = vars.position[j][static_cast<std::size_t>(k)];
            const VarId pk1 = vars.position[j][static_cast<std::size_t>(k) + 1];
            const VarId vk = vars.moving[j][static_cast<std::size_t>(k)];

            ConstraintPtr ride_guard = c_true();
            if (fleet.is_uav(j))
                ride_guard = c_not(c_and({c_lit(vars.docked[j][static_cast<std::size_t>(k)]),
                                          c_lit(vars.docked[j][static_cast<std::size_t>(k) + 1])}));

            // Stationary unless moving (docked UAVs ride their host instead).
            p.add(c_implies(c_and({c_lit(vk, false), ride_guard}), var_diff_eq(pk1, pk, 0.0)));

            // One-step reachability per source node.
            const bool start_only = k == 0;
            for (int n = 0; n < n_all; ++n) {
                if (!sys.node_allowed(fleet.members[j].cls, n)) continue;
                if (sys.is_injected_node(n) && !(start_only && vars.start_nodes[j] == n)) continue;
                if (k > 0 && vars.hop_lb[j][static_cast<std::size_t>(n)] > k) continue;
                const auto& adj = ugv ? sys.adj_road[static_cast<std::size_t>(n)]
                                      : sys.adj_air[static_cast<std::size_t>(n)];
                std::vector<ConstraintPtr> next;
                for (int q : adj)
                    if (!sys.is_injected_node(q)) next.push_back(c_eq(pk1, q));
                const ConstraintPtr antecedent =
                    c_and({c_eq(pk, n), c_lit(vk), ride_guard});
                p.add(c_implies(antecedent, c_or(std::move(next))));
            }

            // Docked UAVs sit on their host's pad.
            if (fleet.is_uav(j)) {
                const int host = fleet.host_ugv(j);
                if (host < 0) throw csolve::EncodingError("UAV without a host UGV");
                for (int kk : {k, k + 1}) {
                    if (kk == 0) continue;  // initial state already coherent
                    p.add(c_implies(
                        c_lit(vars.docked[j][static_cast<std::size_t>(kk)]),
                        var_diff_eq(vars.position[j][static_cast<std::size_t>(kk)],
                                    vars.position[static_cast<std::size_t>(host)]
                                                 [static_cast<std::size_t>(kk)],
                                    0.0)));
                }
            }
        }
    }

    // Energy dynamics.
    for (int k = 0; k < K; ++k) {
        for (std::size_t j = 0; j < J; ++j) {
            const VarId bk = vars.battery[j][static_cast<std::size_t>(k)];
            const VarId bk1 = vars.battery[j][static_cast<std::size_t>(k) + 1];
            const VarId vk = vars.moving[j][static_cast<std::size_t>(k)];
            if (fleet.is_ugv(j)) {
                const auto uavs = fleet.uavs_of_group(fleet.members[j].group);
                const std::size_t m = uavs.size();
                for (std::size_t mask = 0; mask < (std::size_t{1} << m); ++mask) {
                    for (bool drive : {false, true}) {
                        std::vector<ConstraintPtr> ante;
                        int charging = 0;
                        for (std::size_t b = 0; b < m; ++b) {
                            const bool on = mask & (std::size_t{1} << b);
                            if (on) ++charging;
                            ante.push_back(
                                c_lit(vars.docked[uavs[b]][static_cast<std::size_t>(k)], on));
                        }
                        ante.push_back(c_lit(vk, drive));
                        const double delta = -static_cast<double>(charging) * sys.levels.b_charge_a -
                                             (drive ? sys.levels.b_move_g : 0);
                        p.add(c_implies(c_and(std::move(ante)), var_diff_eq(bk1, bk, delta)));
                    }
                }
                // Pad limit for oversized groups.
                if (m > 2) {
                    for (std::size_t a = 0; a < m; ++a)
                        for (std::size_t b = a + 1; b < m; ++b)
                            for (std::size_t c = b + 1; c < m; ++c)
                                p.add(c_not(c_and(
                                    {c_lit(vars.docked[uavs[a]][static_cast<std::size_t>(k)]),
                                     c_lit(vars.docked[uavs[b]][static_cast<std::size_t>(k)]),
                                     c_lit(vars.docked[uavs[c]][static_cast<std::size_t>(k)])})));
                }
            } else {
                const VarId pk = vars.position[j][static_cast<std::size_t>(k)];
                std::vector<ConstraintPtr> at_depot;
                for (int d : sys.depot_ids) at_depot.push_back(c_eq(pk, d));
                const ConstraintPtr dp = c_or(std::move(at_depot));
                const ConstraintPtr sk = c_lit(vars.docked[j][static_cast<std::size_t>(k)]);
                const ConstraintPtr chg = c_or({sk, dp});
                const ConstraintPtr no_chg = c_not(chg);
                const ConstraintPtr below =
                    c_linear({{1.0, bk}}, Rel::Le, sys.levels.charge_cap_a);
                const ConstraintPtr above =
                    c_linear({{1.0, bk}}, Rel::Ge, sys.levels.charge_cap_a + 1.0);
                const double Bc = sys.levels.b_charge_a;
                const double Bm = sys.levels.b_move_a;
                p.add(c_implies(c_and({no_chg, c_lit(vk, false)}), var_diff_eq(bk1, bk, 0.0)));
                p.add(c_implies(c_and({no_chg, c_lit(vk)}), var_diff_eq(bk1, bk, -Bm)));
                p.add(c_implies(c_and({chg, c_lit(vk, false), below}),
                                var_diff_eq(bk1, bk, Bc)));
                p.add(c_implies(c_and({chg, c_lit(vk, false), above}),
                                var_diff_eq(bk1, bk, 0.0)));
                p.add(c_implies(c_and({chg, c_lit(vk), below}), var_diff_eq(bk1, bk, Bc - Bm)));
                p.add(c_implies(c_and({chg, c_lit(vk), above}), var_diff_eq(bk1, bk, -Bm)));
            }
        }
    }

    // Coverage of every key class.
    for (const auto& sc : inst.spec->key_state_classes) {
        std::vector<ConstraintPtr> lits;
        for (std::size_t j = 0; j < J; ++j) {
            for (int n : sc.witness_nodes) {
                if (!sys.node_allowed(fleet.members[j].cls, n)) continue;
                const int lb = vars.hop_lb[j][static_cast<std::size_t>(n)];
                for (int k = lb; k <= K; ++k)
                    lits.push_back(c_eq(vars.position[j][static_cast<std::size_t>(k)], n));
            }
        }
        p.add(c_or(std::move(lits)));
    }
    for (const auto& tc : inst.spec->key_transition_classes) {
        std::vector<ConstraintPtr> lits;
        for (std::size_t j = 0; j < J; ++j) {
            const bool ugv = fleet.is_ugv(j);
            for (const auto& e : tc.witness_edges) {
                if (!sys.node_allowed(fleet.members[j].cls, e.from) ||
                    !sys.node_allowed(fleet.members[j].cls, e.to))
                    continue;
                const auto& adj = ugv ? sys.adj_road[static_cast<std::size_t>(e.from)]
                                      : sys.adj_air[static_cast<std::size_t>(e.from)];
                if (std::find(adj.begin(), adj.end(), e.to) == adj.end()) continue;
                const int lb = std::max(vars.hop_lb[j][static_cast<std::size_t>(e.from)],
                                        vars.hop_lb[j][static_cast<std::size_t>(e.to)] - 1);
                for (int k = lb; k < K; ++k)
                    lits.push_back(
                        c_and({c_eq(vars.position[j][static_cast<std::size_t>(k)], e.from),
                               c_eq(vars.position[j][static_cast<std::size_t>(k) + 1], e.to)}));
            }
        }
        p.add(c_or(std::move(lits)));
    }

    if (inst.spec->total() == 0 && inst.sites && !inst.sites->empty())
        throw InfeasibleByConstructionError("assignment classes produced no key sets");

    return enc;
}

int coverage_hop_lower_bound(const TdoInstance& inst) {
    const SampledSystem& sys = *inst.system;
    const core::Fleet& fleet = sys.fleet;
    const auto ids = sys.nodes_of_state(inst.x0, 1e-6);
    if (!ids) throw csolve::EncodingError("initial state is not on sampled nodes");
    std::vector<std::vector<int>> hops;
    for (std::size_t j = 0; j < fleet.size(); ++j)
        hops.push_back(bfs_hops(sys, fleet.members[j].cls, (*ids)[j]));

    int k_lo = 1;
    auto consider = [&](int needed) { k_lo = std::max(k_lo, needed); };
    for (const auto& sc : inst.spec->key_state_classes) {
        int best = kUnreachable;
        for (std::size_t j = 0; j < fleet.size(); ++j)
            for (int n : sc.witness_nodes)
                if (sys.node_allowed(fleet.members[j].cls, n))
                    best = std::min(best, hops[j][static_cast<std::size_t>(n)]);
        if (best < kUnreachable) consider(best);
    }
    for (const auto& tc : inst.spec->key_transition_classes) {
        int best = kUnreachable;
        for (std::size_t j = 0; j < fleet.size(); ++j)
            for (const auto& e : tc.witness_edges)
                if (sys.node_allowed(fleet.members[j].cls, e.from) &&
                    sys.node_allowed(fleet.members[j].cls, e.to))
                    best = std::min(best,
                                    std::max(hops[j][static_cast<std::size_t>(e.from)],
                                             hops[j][static_cast<std::size_t>(e.to)] - 1) +
                                        1);
        if (best < kUnreachable) consider(best);
    }
    return k_lo;
}

csolve::SolverOptions make_tdo_options(const EncodedTdo& enc, const TdoInstance& inst,
                                       double budget_s, std::uint64_t seed) {
    csolve::SolverOptions opts;
    opts.budget_s = budget_s;
    opts.seed = seed;

    const SampledSystem* sys = inst.system;
    const core::Fleet& fleet = sys->fleet;
    const std::size_t J = fleet.size();
    const int K = inst.horizon_steps;

    // Reverse lookup: var id -> (kind, vehicle, step).
    struct Slot {
        enum class Kind : std::uint8_t { Position, Docked, Moving, Other } kind = Kind::Other;
        std::size_t vehicle = 0;
        int step = 0;
    };
    auto slots = std::make_shared<std::vector<Slot>>(enc.problem.vars().size());
    for (std::size_t j = 0; j < J; ++j) {
        for (int k = 0; k <= K; ++k)
            (*slots)[static_cast<std::size_t>(enc.vars.position[j][static_cast<std::size_t>(k)])] =
                {Slot::Kind::Position, j, k};
        if (fleet.is_uav(j))
            for (int k = 0; k <= K; ++k)
                (*slots)[static_cast<std::size_t>(enc.vars.docked[j][static_cast<std::size_t>(k)])] =
                    {Slot::Kind::Docked, j, k};
        for (int k = 0; k < K; ++k)
            (*slots)[static_cast<std::size_t>(enc.vars.moving[j][static_cast<std::size_t>(k)])] =
                {Slot::Kind::Moving, j, k};
    }

    // Hop distances from every witness node, for greedy target pulls.
    struct ClassInfo {
        std::vector<int> witnesses;        // state witnesses or edge endpoints
        std::vector<std::size_t> vehicles; // vehicles able to cover it
    };
    auto classes = std::make_shared<std::vector<ClassInfo>>();
    for (const auto& sc : inst.spec->key_state_classes) {
        ClassInfo ci;
        ci.witnesses = sc.witness_nodes;
        for (std::size_t j = 0; j < J; ++j)
            for (int n : sc.witness_nodes)
                if (sys->node_allowed(fleet.members[j].cls, n)) {
                    ci.vehicles.push_back(j);
                    break;
                }
        classes->push_back(std::move(ci));
    }
    for (const auto& tc : inst.spec->key_transition_classes) {
        ClassInfo ci;
        for (const auto& e : tc.witness_edges) {
            ci.witnesses.push_back(e.from);
            ci.witnesses.push_back(e.to);
        }
        std::sort(ci.witnesses.begin(), ci.witnesses.end());
        ci.witnesses.erase(std::unique(ci.witnesses.begin(), ci.witnesses.end()),
                           ci.witnesses.end());
        for (std::size_t j = 0; j < J; ++j)
            if (fleet.is_uav(j)) ci.vehicles.push_back(j);  // edges are air-traversable
        classes->push_back(std::move(ci));
    }

    // BFS from each witness node per vehicle class (road vs air metric).
    auto dist_to = std::make_shared<std::map<std::pair<int, int>, std::vector<int>>>();
    for (const auto& ci : *classes)
        for (int w : ci.witnesses) {
            for (int cls = 0; cls < 2; ++cls) {
                const auto key = std::make_pair(w, cls);
                if (dist_to->count(key)) continue;
                const auto vc = cls == 0 ? core::VehicleClass::Ugv : core::VehicleClass::Uav;
                if (!sys->node_allowed(vc, w)) continue;
                (*dist_to)[key] = bfs_hops(*sys, vc, w);
            }
        }

    // Air hops from every node to the nearest depot pad, for battery safety.
    auto depot_hops = std::make_shared<std::vector<int>>(sys->nodes.size(), kUnreachable);
    for (int d : sys->depot_ids) {
        const auto from_d = bfs_hops(*sys, core::VehicleClass::Uav, d);
        for (std::size_t n = 0; n < from_d.size(); ++n)
            (*depot_hops)[n] = std::min((*depot_hops)[n], from_d[n]);
    }

    auto enc_vars = std::make_shared<TdoVars>(enc.vars);
    auto spec_copy = std::make_shared<core::SpecClasses>(*inst.spec);

    opts.value_heuristic = [slots, classes, dist_to, depot_hops, enc_vars, spec_copy, sys,
                            &fleet = sys->fleet,
                            K](const csolve::Var& var, const csolve::AssignmentView& view,
                               std::vector<long long>& values) {
        const Slot& slot = (*slots)[static_cast<std::size_t>(var.id)];
        if (slot.kind == Slot::Kind::Other || values.size() <= 1) return;

        // Which classes are already covered by the fixed prefix?
        auto covered = [&](const ClassInfo& ci, std::size_t index) {
            (void)ci;
            // State classes: any fixed position on a witness; transition classes:
            // any fixed consecutive pair on a witness edge.
            if (index < spec_copy->key_state_classes.size()) {
                const auto& sc = spec_copy->key_state_classes[index];
                for (std::size_t j = 0; j < enc_vars->position.size(); ++j)
                    for (int k = 0; k <= K; ++k) {
                        const auto val =
                            view.value_of(enc_vars->position[j][static_cast<std::size_t>(k)]);
                        if (!val) continue;
                        for (int n : sc.witness_nodes)
                            if (*val == n) return true;
                    }
                return false;
            }
            const auto& tc =
                spec_copy->key_transition_classes[index - spec_copy->key_state_classes.size()];
            for (std::size_t j = 0; j < enc_vars->position.size(); ++j)
                for (int k = 0; k < K; ++k) {
                    const auto a = view.value_of(enc_vars->position[j][static_cast<std::size_t>(k)]);
                    const auto b =
                        view.value_of(enc_vars->position[j][static_cast<std::size_t>(k) + 1]);
                    if (!a || !b) continue;
                    for (const auto& e : tc.witness_edges)
                        if (*a == e.from && *b == e.to) return true;
                }
            return false;
        };

        std::vector<std::size_t> open;
        for (std::size_t ci = 0; ci < classes->size(); ++ci)
            if (!covered((*classes)[ci], ci)) open.push_back(ci);

        const std::size_t j = slot.vehicle;
        const bool is_uav = fleet.is_uav(j);

        if (slot.kind == Slot::Kind::Moving || slot.kind == Slot::Kind::Docked) {
            // Move while work remains; charge when the battery var is known low.
            bool prefer_true = !open.empty();
            const auto b = view.value_of(
                enc_vars->battery[j][static_cast<std::size_t>(slot.step)]);
            if (slot.kind == Slot::Kind::Docked) {
                prefer_true = b && *b + sys->levels.b_charge_a <= sys->levels.b_max_a &&
                              *b <= sys->levels.charge_cap_a;
            } else if (is_uav && b) {
                // Sitting on a charger with a thin battery: prefer staying.
                const auto pos = view.value_of(
                    enc_vars->position[j][static_cast<std::size_t>(slot.step)]);
                if (pos && *b <= 3 * sys->levels.b_move_a &&
                    ((*depot_hops)[static_cast<std::size_t>(*pos)] == 0))
                    prefer_true = false;
            }
            if (prefer_true && values.size() == 2) std::swap(values[0], values[1]);
            return;
        }

        // Position variable: pull toward the nearest open class this vehicle can
        // serve while keeping a depot within battery reach.
        const int cls_key = fleet.is_ugv(j) ? 0 : 1;
        const auto prev =
            slot.step > 0
                ? view.value_of(enc_vars->position[j][static_cast<std::size_t>(slot.step) - 1])
                : std::nullopt;
        const auto battery = view.value_of(
            enc_vars->battery[j][static_cast<std::size_t>(slot.step)]);

        auto score = [&](long long node) {
            int best = kUnreachable;
            for (std::size_t ci : open) {
                const auto& info = (*classes)[ci];
                if (std::find(info.vehicles.begin(), info.vehicles.end(), j) ==
                    info.vehicles.end())
                    continue;
                for (int w : info.witnesses) {
                    auto it = dist_to->find({w, cls_key});
                    if (it == dist_to->end()) continue;
                    best = std::min(best, it->second[static_cast<std::size_t>(node)]);
                }
            }
            if (is_uav && battery) {
                // The battery var at this step already nets out the move here;
                // penalize nodes from which no depot remains reachable.
                const int back = (*depot_hops)[static_cast<std::size_t>(node)];
                const long long needed =
                    static_cast<long long>(back) * sys->levels.b_move_a;
                if (back >= kUnreachable || *battery < needed) best += 1 << 16;
            }
            return best;
        };
        if (open.empty()) {
            // Nothing left: prefer staying put.
            if (prev)
                std::stable_sort(values.begin(), values.end(), [&](long long a, long long b) {
                    return (a == *prev) > (b == *prev);
                });
            return;
        }
        std::vector<std::pair<int, long long>> ranked;
        ranked.reserve(values.size());
        for (long long v : values) ranked.emplace_back(score(v), v);
        std::sort(ranked.begin(), ranked.end());
        for (std::size_t i = 0; i < values.size(); ++i) values[i] = ranked[i].second;
    };
    return opts;
}

}  // namespace iterplan::tdo
