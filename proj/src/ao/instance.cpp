#include "iterplan/ao/instance.hpp"

#include <algorithm>

#include "iterplan/vehicle/energy.hpp"

namespace iterplan::ao {

double AoInstance::psi_kj(int i, int j) const {
    const vehicle::EnergyModel model;
    return vehicle::uav_power(model, v_free_mps) * phi_s(i, j) / 1000.0;
}

std::vector<int> AoInstance::visit_nodes() const {
    std::vector<int> out;
    for (int i = 0; i < static_cast<int>(nodes.size()); ++i)
        if (nodes[static_cast<std::size_t>(i)].kind == AoNode::Kind::Visit) out.push_back(i);
    return out;
}

std::vector<int> class_ownership(const planner::Plan& team_plan, const core::SpecClasses& spec,
                                 const core::TaskSiteAssignment& sites) {
    const auto& traj = team_plan.trajectory;
    std::vector<int> owner(sites.classes.size(), -1);
    std::vector<double> when(sites.classes.size(), std::numeric_limits<double>::infinity());

    auto try_claim = [&](int cls, double t, int vehicle) {
        if (t < when[static_cast<std::size_t>(cls)]) {
            when[static_cast<std::size_t>(cls)] = t;
            owner[static_cast<std::size_t>(cls)] = vehicle;
        }
    };

    for (const auto& sc : spec.key_state_classes) {
        const auto& cls = sites.classes[static_cast<std::size_t>(sc.class_index)];
        for (const auto& x : traj.states)
            for (std::size_t j = 0; j < x.vehicles.size(); ++j)
                if (cls.contains_point(x.vehicles[j].pos_km))
                    try_claim(sc.class_index, x.time_s, static_cast<int>(j));
    }
    for (const auto& tc : spec.key_transition_classes) {
        const auto& cls = sites.classes[static_cast<std::size_t>(tc.class_index)];
        for (std::size_t k = 0; k < traj.labels.size(); ++k)
            for (std::size_t j = 0; j < traj.states[k].vehicles.size(); ++j) {
                const geom::Vec2 a = traj.states[k].vehicles[j].pos_km;
                const geom::Vec2 b = traj.states[k + 1].vehicles[j].pos_km;
                if (geom::point_segment_distance(cls.site_km, a, b) <= cls.radius_km) {
                    const double t = traj.states[k].time_s +
                                     geom::closest_param_on_segment(cls.site_km, a, b) *
                                         traj.labels[k].duration_s;
                    try_claim(tc.class_index, t, static_cast<int>(j));
                }
            }
    }
    return owner;
}

AoInstance extract_agent_subproblem(const planner::Plan& team_plan, std::size_t agent,
                                    const SampledSystem& system, const core::SpecClasses& spec,
                                    const core::TaskSiteAssignment& sites) {
    const auto& traj = team_plan.trajectory;
    const core::Fleet& fleet = system.fleet;
    if (!fleet.is_uav(agent)) throw std::invalid_argument("agent-level stage refines UAVs");

    AoInstance inst;
    inst.agent = agent;
    inst.gamma_d_s = system.gamma_d_s;
    inst.start_time_s = traj.states.front().time_s;
    inst.energy0_kj = traj.states.front().vehicles[agent].energy_kj;
    inst.capacity_kj = system.model.b_uav_kj;
    inst.v_free_mps = system.model.v_a_max;
    inst.charge_step_kj = system.levels.b_charge_a * system.levels.unit_a_kj;
    inst.charge_cap_kj = system.levels.charge_cap_a * system.levels.unit_a_kj;
    inst.horizon_s = traj.states.back().time_s + 2.0 * system.gamma_d_s;

    AoNode start;
    start.kind = AoNode::Kind::Start;
    start.pos_km = traj.states.front().vehicles[agent].pos_km;
    inst.nodes.push_back(start);

    // Owned task sites become visit coordinates (the exact site points).
    const std::vector<int> owner = class_ownership(team_plan, spec, sites);
    std::vector<int> class_node(sites.classes.size(), -1);
    for (std::size_t c = 0; c < sites.classes.size(); ++c) {
        if (owner[c] != static_cast<int>(agent)) continue;
        AoNode n;
        n.kind = AoNode::Kind::Visit;
        n.pos_km = sites.classes[c].site_km;
        n.site_class = static_cast<int>(c);
        class_node[c] = static_cast<int>(inst.nodes.size());
        inst.nodes.push_back(n);
    }

    for (int d = 0; d < static_cast<int>(system.depot_positions.size()); ++d) {
        AoNode n;
        n.kind = AoNode::Kind::Depot;
        n.pos_km = system.depot_positions[static_cast<std::size_t>(d)];
        n.depot_index = d;
        inst.nodes.push_back(n);
    }

    // Host UGV stationary steps become timed charge windows. A step parked over
    // [t, t+gamma_d] contributes presence nodes at both ends, so a chain of c
    // parked steps yields c charge legs.
    const int host = fleet.host_ugv(agent);
    std::vector<int> window_node_at_step(traj.labels.size(), -1);
    std::vector<int> window_end_at_step(traj.labels.size(), -1);
    if (host >= 0) {
        auto window_node = [&](geom::Vec2 p, double t) {
            for (int i = 0; i < static_cast<int>(inst.nodes.size()); ++i) {
                const auto& n = inst.nodes[static_cast<std::size_t>(i)];
                if (n.kind == AoNode::Kind::Rendezvous && geom::dist(n.pos_km, p) <= 1e-9 &&
                    std::abs(n.window_s - t) <= 1e-6)
                    return i;
            }
            AoNode n;
            n.kind = AoNode::Kind::Rendezvous;
            n.pos_km = p;
            n.window_s = t;
            n.host_ugv = host;
            inst.nodes.push_back(n);
            return static_cast<int>(inst.nodes.size()) - 1;
        };
        for (std::size_t k = 0; k < traj.labels.size(); ++k) {
            const auto& a = traj.states[k].vehicles[static_cast<std::size_t>(host)];
            const auto& b = traj.states[k + 1].vehicles[static_cast<std::size_t>(host)];
            if (geom::dist(a.pos_km, b.pos_km) > 1e-9) continue;
            window_node_at_step[k] = window_node(a.pos_km, traj.states[k].time_s);
            window_end_at_step[k] = window_node(a.pos_km, traj.states[k + 1].time_s);
        }
    }

    // Anchor route: replay the agent's own team-plan movement, claiming owned
    // sites, charging at windows it used, and keeping other waypoints as
    // fallback anchors.
    auto anchor_wp = [&](geom::Vec2 p) {
        for (int i = 0; i < static_cast<int>(inst.nodes.size()); ++i)
            if (geom::dist(inst.nodes[static_cast<std::size_t>(i)].pos_km, p) <= 1e-9 &&
                inst.nodes[static_cast<std::size_t>(i)].kind != AoNode::Kind::Rendezvous)
                return i;
        AoNode n;
        n.kind = AoNode::Kind::AnchorWp;
        n.pos_km = p;
        inst.nodes.push_back(n);
        return static_cast<int>(inst.nodes.size()) - 1;
    };

    inst.anchor_route.push_back(0);
    std::vector<bool> claimed(sites.classes.size(), false);
    auto claim_here = [&](geom::Vec2 p, double radius_slack) {
        for (std::size_t c = 0; c < sites.classes.size(); ++c) {
            if (claimed[c] || class_node[c] < 0) continue;
            if (geom::dist(p, sites.classes[c].site_km) <= sites.classes[c].radius_km + radius_slack) {
                claimed[c] = true;
                if (inst.anchor_route.back() != class_node[c])
                    inst.anchor_route.push_back(class_node[c]);
            }
        }
    };
    claim_here(traj.states.front().vehicles[agent].pos_km, 0.0);
    for (std::size_t k = 0; k < traj.labels.size(); ++k) {
        const geom::Vec2 a = traj.states[k].vehicles[agent].pos_km;
        const geom::Vec2 b = traj.states[k + 1].vehicles[agent].pos_km;
        const bool docked_here =
            traj.states[k].vehicles[agent].flag == core::StatusFlag::UavDocked &&
            traj.states[k + 1].vehicles[agent].flag == core::StatusFlag::UavDocked;
        // Mid-step pass-throughs of owned sites.
        for (std::size_t c = 0; c < sites.classes.size(); ++c) {
            if (claimed[c] || class_node[c] < 0) continue;
            if (geom::point_segment_distance(sites.classes[c].site_km, a, b) <=
                sites.classes[c].radius_km) {
                claimed[c] = true;
                if (inst.anchor_route.back() != class_node[c])
                    inst.anchor_route.push_back(class_node[c]);
            }
        }
        // Stationary charge on the parked host becomes a window chain.
        if (docked_here && window_node_at_step[k] >= 0) {
            const int w0 = window_node_at_step[k];
            const int w1 = window_end_at_step[k];
            if (inst.anchor_route.back() != w0) inst.anchor_route.push_back(w0);
            inst.anchor_route.push_back(w1);
            continue;
        }
        claim_here(b, 0.0);
        // Keep end-of-step waypoints that are not already route nodes.
        if (geom::dist(a, b) > 1e-9) {
            const int wp = anchor_wp(b);
            if (inst.anchor_route.back() != wp) inst.anchor_route.push_back(wp);
        }
    }

    return inst;
}

}  // namespace iterplan::ao
