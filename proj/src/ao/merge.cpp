#include "iterplan/ao/merge.hpp"

#include <algorithm>
#include <cmath>
#include <map>

#include "iterplan/vehicle/energy.hpp"

namespace iterplan::ao {

namespace {

struct Breakpoint {
    double t = 0.0;
    geom::Vec2 pos;
    double energy = 0.0;
    bool docked = false;   // charging on the host pad
    bool charging = false; // energy rises over the interval starting here
};

struct ChargeUse {
    std::size_t agent = 0;
    int host = -1;
    double window_s = 0.0;
    double arrival_s = 0.0;
};

std::vector<ChargeUse> charge_uses(const AgentOutcome& oc) {
    std::vector<ChargeUse> uses;
    const auto& inst = oc.instance;
    const auto& sol = oc.solution;
    double entry_time = 0.0;
    bool in_chain = false;
    for (std::size_t k = 0; k + 1 < sol.route.size(); ++k) {
        const auto& a = inst.nodes[static_cast<std::size_t>(sol.route[k])];
        const auto& b = inst.nodes[static_cast<std::size_t>(sol.route[k + 1])];
        const bool leg_is_charge =
            a.kind == AoNode::Kind::Rendezvous && b.kind == AoNode::Kind::Rendezvous &&
            geom::dist(a.pos_km, b.pos_km) <= 1e-9 &&
            std::abs(b.window_s - (a.window_s + inst.gamma_d_s)) <= 1e-6;
        if (leg_is_charge) {
            if (!in_chain) {
                entry_time = sol.times_s[k];
                in_chain = true;
            }
            uses.push_back({oc.agent, a.host_ugv, a.window_s, entry_time});
        } else {
            in_chain = false;
        }
    }
    return uses;
}

// Per-agent breakpoints expanded from the refined route.
std::vector<Breakpoint> route_breakpoints(const AgentOutcome& oc) {
    const auto& inst = oc.instance;
    const auto& sol = oc.solution;
    std::vector<Breakpoint> bps;
    bps.push_back({sol.times_s[0], inst.nodes[0].pos_km, sol.energies_kj[0], false, false});
    for (std::size_t k = 0; k + 1 < sol.route.size(); ++k) {
        const int i = sol.route[k];
        const int j = sol.route[k + 1];
        const auto& src = inst.nodes[static_cast<std::size_t>(i)];
        const auto& dst = inst.nodes[static_cast<std::size_t>(j)];
        const double t0 = sol.times_s[k];
        const double e0 = sol.energies_kj[k];
        const double t1 = sol.times_s[k + 1];
        const double e1 = sol.energies_kj[k + 1];
        const double phi = inst.phi_s(i, j);
        const bool leg_is_charge =
            src.kind == AoNode::Kind::Rendezvous && dst.kind == AoNode::Kind::Rendezvous &&
            geom::dist(src.pos_km, dst.pos_km) <= 1e-9 &&
            std::abs(dst.window_s - (src.window_s + inst.gamma_d_s)) <= 1e-6;
        if (leg_is_charge) {
            bps.back().docked = true;
            bps.back().charging = e1 > e0 + 1e-9;
            bps.push_back({t1, dst.pos_km, e1, false, false});
        } else if (dst.kind == AoNode::Kind::Rendezvous) {
            if (phi > 1e-9 || t0 + 1e-9 < t1) {
                bps.push_back({t0 + phi, dst.pos_km, e1, false, false});  // arrive
                if (t1 > t0 + phi + 1e-9)
                    bps.push_back({t1, dst.pos_km, e1, false, false});  // wait parked
            }
        } else if (dst.kind == AoNode::Kind::Depot) {
            const double arrive = t0 + phi;
            const double e_arrive = e0 - inst.psi_kj(i, j);
            const double start = t1 - inst.gamma_d_s;
            bps.push_back({arrive, dst.pos_km, e_arrive, false, false});
            if (start > arrive + 1e-9) bps.push_back({start, dst.pos_km, e_arrive, false, false});
            bps.back().charging = e1 > e_arrive + 1e-9;
            bps.push_back({t1, dst.pos_km, e1, false, false});
        } else {
            if (t1 > t0 + 1e-9 || geom::dist(src.pos_km, dst.pos_km) > 1e-9)
                bps.push_back({t1, dst.pos_km, e1, false, false});
        }
    }
    return bps;
}

Breakpoint sample_breakpoints(const std::vector<Breakpoint>& bps, double t) {
    if (t <= bps.front().t) return bps.front();
    for (std::size_t i = 1; i < bps.size(); ++i) {
        if (t <= bps[i].t + 1e-12) {
            const auto& a = bps[i - 1];
            const auto& b = bps[i];
            const double span = b.t - a.t;
            const double u = span > 1e-12 ? (t - a.t) / span : 1.0;
            Breakpoint out = a;
            out.t = t;
            out.pos = geom::lerp(a.pos, b.pos, u);
            out.energy = a.energy + (b.energy - a.energy) * u;
            return out;
        }
    }
    Breakpoint out = bps.back();
    out.t = t;
    return out;
}

}  // namespace

planner::Plan merge_agent_plans(const planner::Plan& team_plan,
                                const std::vector<AgentOutcome>& outcomes,
                                const sampler::SampledSystem& system,
                                const core::SpecClasses& spec,
                                const core::TaskSiteAssignment& sites) {
    const core::Fleet& fleet = system.fleet;
    const double t0 = team_plan.trajectory.states.front().time_s;
    const double team_end = t0 + team_plan.implementation.total_duration();

    // Which refinements apply; pad conflicts revert the later arrival.
    std::vector<const AgentOutcome*> applied;
    for (const auto& oc : outcomes)
        if (oc.solution.improved) applied.push_back(&oc);

    bool conflict = true;
    while (conflict) {
        conflict = false;
        std::map<std::pair<int, long long>, std::vector<ChargeUse>> pad;
        for (const auto* oc : applied)
            for (const auto& u : charge_uses(*oc))
                pad[{u.host, static_cast<long long>(std::llround(u.window_s))}].push_back(u);
        // Incumbent dockings from the team plan occupy pads too.
        for (std::size_t j = 0; j < fleet.size(); ++j) {
            if (!fleet.is_uav(j)) continue;
            const bool is_applied = std::any_of(applied.begin(), applied.end(),
                                                [&](const auto* oc) { return oc->agent == j; });
            if (is_applied) continue;
            const auto& traj = team_plan.trajectory;
            for (std::size_t k = 0; k < traj.labels.size(); ++k)
                if (traj.states[k].vehicles[j].flag == core::StatusFlag::UavDocked &&
                    traj.states[k + 1].vehicles[j].flag == core::StatusFlag::UavDocked)
                    pad[{fleet.host_ugv(j),
                         static_cast<long long>(std::llround(traj.states[k].time_s))}]
                        .push_back({j, fleet.host_ugv(j), traj.states[k].time_s,
                                    traj.states[k].time_s});
        }
        for (auto& [key, uses] : pad) {
            if (static_cast<int>(uses.size()) <= 2) continue;
            // Latest arrival among applied users reverts.
            const ChargeUse* victim = nullptr;
            for (const auto& u : uses) {
                const bool u_applied = std::any_of(applied.begin(), applied.end(),
                                                   [&](const auto* oc) { return oc->agent == u.agent; });
                if (!u_applied) continue;
                if (!victim || u.arrival_s > victim->arrival_s ||
                    (u.arrival_s == victim->arrival_s && u.agent > victim->agent))
                    victim = &u;
            }
            if (victim) {
                applied.erase(std::remove_if(applied.begin(), applied.end(),
                                             [&](const auto* oc) { return oc->agent == victim->agent; }),
                              applied.end());
                conflict = true;
                break;
            }
        }
    }

    // Per-vehicle breakpoints.
    std::map<std::size_t, std::vector<Breakpoint>> refined;
    double horizon = team_end;
    for (const auto* oc : applied) {
        refined[oc->agent] = route_breakpoints(*oc);
        horizon = std::max(horizon, refined[oc->agent].back().t);
    }

    // Union time grid.
    std::vector<double> grid;
    for (double b : team_plan.implementation.boundaries()) grid.push_back(t0 + b);
    for (const auto& [agent, bps] : refined)
        for (const auto& bp : bps) grid.push_back(bp.t);
    grid.push_back(horizon);
    std::sort(grid.begin(), grid.end());
    grid.erase(std::unique(grid.begin(), grid.end(),
                           [](double a, double b) { return std::abs(a - b) < 1e-9; }),
               grid.end());
    if (grid.size() < 2) grid.push_back(grid.front() + system.gamma_d_s);

    // System states at grid times.
    std::vector<core::SystemState> states;
    for (double t : grid) {
        const double team_t = std::clamp(t - t0, 0.0, team_plan.implementation.total_duration());
        core::SystemState base = team_plan.implementation.at(team_t);
        base.time_s = t;
        for (const auto& [agent, bps] : refined) {
            const Breakpoint bp = sample_breakpoints(bps, t);
            base.vehicles[agent].pos_km = bp.pos;
            base.vehicles[agent].energy_kj = bp.energy;
            base.vehicles[agent].flag =
                bp.docked ? core::StatusFlag::UavDocked : core::StatusFlag::UavFree;
        }
        for (std::size_t g = 0; g < fleet.size(); ++g) {
            if (!fleet.is_ugv(g)) continue;
            int docked = 0;
            for (std::size_t j : fleet.uavs_of_group(fleet.members[g].group))
                if (base.vehicles[j].flag == core::StatusFlag::UavDocked) ++docked;
            base.vehicles[g].flag = static_cast<core::StatusFlag>(std::min(docked, 2));
        }
        states.push_back(std::move(base));
    }

    std::vector<core::Implementation::Segment> segs;
    for (std::size_t i = 0; i + 1 < states.size(); ++i) {
        core::Implementation::Segment seg;
        seg.from = states[i];
        seg.to = states[i + 1];
        seg.duration_s = states[i + 1].time_s - states[i].time_s;
        for (std::size_t j = 0; j < fleet.size(); ++j) {
            const auto& a = seg.from.vehicles[j];
            const auto& b = seg.to.vehicles[j];
            if (geom::dist(a.pos_km, b.pos_km) > 1e-9)
                seg.activities.push_back(core::Activity::MoveLinear);
            else if (b.energy_kj > a.energy_kj + 1e-9)
                seg.activities.push_back(core::Activity::ChargeCurve);
            else
                seg.activities.push_back(core::Activity::Hold);
        }
        segs.push_back(std::move(seg));
    }
    const vehicle::EnergyModel model_copy = system.model;
    core::Implementation merged(std::move(segs), [model_copy](double e0, double dt) {
        return vehicle::integrate_charge(model_copy, e0, dt);
    });

    // Site pass-throughs become boundaries, then completion time is the last
    // first-cover over all classes.
    for (const auto& cls : sites.classes) {
        std::vector<double> hits;
        double acc = 0.0;
        for (const auto& seg : merged.segments()) {
            for (std::size_t j = 0; j < fleet.size(); ++j) {
                const geom::Vec2 a = seg.from.vehicles[j].pos_km;
                const geom::Vec2 b = seg.to.vehicles[j].pos_km;
                if (geom::point_segment_distance(cls.site_km, a, b) <= cls.radius_km)
                    hits.push_back(acc + geom::closest_param_on_segment(cls.site_km, a, b) *
                                             seg.duration_s);
            }
            acc += seg.duration_s;
        }
        for (double t : hits) merged.insert_breakpoint(t);
    }

    double completion = 0.0;
    for (const auto& cls : sites.classes) {
        double first = std::numeric_limits<double>::infinity();
        for (double t : core::sweep_times(merged, 1.0)) {
            if (cls.contains(core::output_behavior(merged, t))) {
                first = t;
                break;
            }
        }
        if (!std::isfinite(first)) throw std::runtime_error("merged plan misses a task site");
        completion = std::max(completion, first);
    }
    (void)spec;

    const double first_boundary = merged.boundaries().size() > 1 ? merged.boundaries()[1]
                                                                 : merged.total_duration();
    if (completion < merged.total_duration() - 1e-9)
        merged.truncate(std::max(completion, first_boundary));

    planner::Plan out;
    out.objective_s = t0 + completion;
    // Trajectory mirrors the merged segment boundaries.
    core::Trajectory traj;
    traj.states.push_back(merged.initial_state());
    for (const auto& seg : merged.segments()) {
        traj.states.push_back(seg.to);
        traj.labels.push_back({seg.duration_s});
    }
    out.trajectory = std::move(traj);
    out.implementation = std::move(merged);
    out.producer = "tdo+ao";
    return out;
}

}  // namespace iterplan::ao
