#include "iterplan/tdo/solve.hpp"

#include <algorithm>
#include <chrono>
#include <fstream>

#include "iterplan/csolve/smtlib.hpp"
#include "iterplan/csolve/verify.hpp"

namespace iterplan::tdo {

namespace {

long long model_int(const csolve::Model& m, csolve::VarId id) {
    const auto& v = m.at(id);
    if (std::holds_alternative<long long>(v)) return std::get<long long>(v);
    if (std::holds_alternative<bool>(v)) return std::get<bool>(v) ? 1 : 0;
    return static_cast<long long>(std::get<double>(v));
}

bool model_bool(const csolve::Model& m, csolve::VarId id) { return model_int(m, id) != 0; }

}  // namespace

planner::Plan decode_tdo(const EncodedTdo& enc, const TdoInstance& inst,
                         const csolve::Model& model) {
    const SampledSystem& sys = *inst.system;
    const core::Fleet& fleet = sys.fleet;
    const int K = inst.horizon_steps;
    const std::size_t J = fleet.size();

    core::Trajectory traj;
    for (int k = 0; k <= K; ++k) {
        core::SystemState x;
        x.time_s = inst.x0.time_s + k * sys.gamma_d_s;
        for (std::size_t j = 0; j < J; ++j) {
            core::VehicleState v;
            const int node = static_cast<int>(
                model_int(model, enc.vars.position[j][static_cast<std::size_t>(k)]));
            v.pos_km = sys.node_pos(node);
            v.energy_kj = model_int(model, enc.vars.battery[j][static_cast<std::size_t>(k)]) *
                          sys.unit_kj(fleet.members[j].cls);
            v.flag = fleet.is_ugv(j) ? core::StatusFlag::UgvNoDock : core::StatusFlag::UavFree;
            x.vehicles.push_back(v);
        }
        for (std::size_t j = 0; j < J; ++j) {
            if (!fleet.is_uav(j)) continue;
            if (model_bool(model, enc.vars.docked[j][static_cast<std::size_t>(k)]))
                x.vehicles[j].flag = core::StatusFlag::UavDocked;
        }
        for (std::size_t g = 0; g < J; ++g) {
            if (!fleet.is_ugv(g)) continue;
            int docked = 0;
            for (std::size_t i : fleet.uavs_of_group(fleet.members[g].group))
                if (x.vehicles[i].flag == core::StatusFlag::UavDocked) ++docked;
            x.vehicles[g].flag = static_cast<core::StatusFlag>(docked);
        }
        traj.states.push_back(std::move(x));
        if (k < K) traj.labels.push_back({sys.gamma_d_s});
    }

    // Trim trailing steps that the specification does not need.
    core::Trajectory trimmed = traj;
    for (int keep = 1; keep <= K; ++keep) {
        core::Trajectory prefix;
        prefix.states.assign(traj.states.begin(), traj.states.begin() + keep + 1);
        prefix.labels.assign(traj.labels.begin(), traj.labels.begin() + keep);
        if (core::satisfies_specification(prefix, *inst.spec, *inst.sites)) {
            trimmed = std::move(prefix);
            break;
        }
    }

    if (!core::validate_trajectory(sys.quantized_relation(), trimmed))
        throw DecodeIntegrityError("decoded trajectory leaves the sampled relation");
    if (!core::satisfies_specification(trimmed, *inst.spec, *inst.sites))
        throw DecodeIntegrityError("decoded trajectory misses a key class");

    // Per-step activities for the implementation.
    std::vector<std::vector<core::Activity>> acts;
    for (std::size_t k = 0; k < trimmed.labels.size(); ++k) {
        std::vector<core::Activity> step;
        for (std::size_t j = 0; j < J; ++j) {
            const auto& a = trimmed.states[k].vehicles[j];
            const auto& b = trimmed.states[k + 1].vehicles[j];
            if (geom::dist(a.pos_km, b.pos_km) > 1e-9)
                step.push_back(core::Activity::MoveLinear);
            else if (b.energy_kj > a.energy_kj + 1e-9)
                step.push_back(core::Activity::ChargeCurve);
            else
                step.push_back(core::Activity::Hold);
        }
        acts.push_back(std::move(step));
    }

    const vehicle::EnergyModel model_copy = sys.model;
    auto charge_fn = [model_copy](double e0, double dt) {
        return vehicle::integrate_charge(model_copy, e0, dt);
    };
    core::Implementation impl = core::implement_trajectory(trimmed, acts, charge_fn);

    // Make every task-site pass-through a segment boundary so a boundary sweep
    // observes the hit exactly.
    for (const auto& cls : inst.sites->classes) {
        std::vector<double> hits;
        double acc = 0.0;
        for (const auto& seg : impl.segments()) {
            for (std::size_t j = 0; j < J; ++j) {
                const geom::Vec2 a = seg.from.vehicles[j].pos_km;
                const geom::Vec2 b = seg.to.vehicles[j].pos_km;
                if (geom::point_segment_distance(cls.site_km, a, b) <= cls.radius_km)
                    hits.push_back(acc +
                                   geom::closest_param_on_segment(cls.site_km, a, b) *
                                       seg.duration_s);
            }
            acc += seg.duration_s;
        }
        for (double t : hits) impl.insert_breakpoint(t);
    }

    planner::Plan plan;
    plan.objective_s = trimmed.states.back().time_s;
    plan.trajectory = std::move(trimmed);
    plan.implementation = std::move(impl);
    plan.producer = "tdo";
    return plan;
}

TdoOutcome solve_tdo(const SampledSystem& system, const SpecClasses& spec,
                     const core::TaskSiteAssignment& sites, const SystemState& x0, int k_max,
                     double budget_s, const TdoOptions& opts) {
    const auto t0 = std::chrono::steady_clock::now();
    auto remaining = [&] {
        return budget_s - std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
                              .count();
    };
    TdoOutcome out;
    TdoInstance inst{&system, &spec, &sites, x0, 1};
    const int k_lo = std::min(std::max(1, coverage_hop_lower_bound(inst)), std::max(1, k_max));

    // Adaptive deepening: strict K+1 while levels resolve fast, widening jumps
    // once a level eats its slice. A deep witness usually covers early, and the
    // decode trim drops the unused horizon tail.
    bool last_unsat = false;
    int k = k_lo;
    int jump = 1;
    while (k <= k_max && remaining() > 0.0) {
        inst.horizon_steps = k;
        EncodedTdo enc = encode_tdo(inst);
        if (!opts.emit_smt_path.empty()) {
            std::ofstream f(opts.emit_smt_path);
            f << csolve::emit_smtlib(enc.problem);
        }
        const double rem = remaining();
        const double slice = k == k_max ? rem : std::clamp(rem / 4.0, std::min(1.0, rem), rem);
        const auto sopts = make_tdo_options(enc, inst, slice, opts.seed);
        const auto level_t0 = std::chrono::steady_clock::now();
        const csolve::SolveResult res = csolve::check_sat(enc.problem, sopts);
        const double level_s =
            std::chrono::duration<double>(std::chrono::steady_clock::now() - level_t0).count();
        out.stats.decisions += res.stats.decisions;
        out.stats.propagations += res.stats.propagations;
        out.stats.conflicts += res.stats.conflicts;
        last_unsat = res.unsat() && k == k_max;
        if (res.sat()) {
            out.kind = TdoOutcome::Kind::Plan;
            out.plan = decode_tdo(enc, inst, res.model);
            out.horizon = k;
            out.elapsed_s = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
                                .count();
            return out;
        }
        if (res.unsat() && level_s < 0.25 * slice) {
            jump = 1;
        } else {
            jump = std::min(jump * 2, 8);
        }
        if (k == k_max) break;
        k = std::min(k + jump, k_max);
    }
    out.elapsed_s = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    out.kind = (last_unsat && remaining() > 0.0) ? TdoOutcome::Kind::Infeasible
                                                 : TdoOutcome::Kind::Timeout;
    return out;
}

}  // namespace iterplan::tdo
