#include "iterplan/vehicle/oracle.hpp"

#include <cmath>
#include <sstream>

namespace iterplan::vehicle {

namespace {

std::string describe(std::size_t j, const char* what) {
    std::ostringstream os;
    os << "vehicle " << j << ": " << what;
    return os.str();
}

}  // namespace

bool state_invariants_ok(const Fleet& fleet, const EnergyModel& model, const RoadGeometry& road,
                         const SystemState& x, double pos_tol_km, double energy_tol_kj,
                         std::string* why) {
    auto fail = [&](const std::string& msg) {
        if (why) *why = msg;
        return false;
    };
    if (x.vehicles.size() != fleet.size()) return fail("fleet shape mismatch");
    if (x.time_s < -1e-9) return fail("negative timestamp");
    for (std::size_t j = 0; j < fleet.size(); ++j) {
        const auto& v = x.vehicles[j];
        const double cap = fleet.members[j].capacity_kj > 0.0 ? fleet.members[j].capacity_kj
                                                              : model.capacity(fleet.members[j].cls);
        if (v.energy_kj < -energy_tol_kj || v.energy_kj > cap + energy_tol_kj)
            return fail(describe(j, "battery outside [0, capacity]"));
        if (fleet.is_ugv(j)) {
            if (!core::is_ugv_flag(v.flag)) return fail(describe(j, "UAV flag on a UGV"));
            if (road.distance_to_road(v.pos_km) > pos_tol_km)
                return fail(describe(j, "UGV off the road"));
        } else {
            if (core::is_ugv_flag(v.flag)) return fail(describe(j, "UGV flag on a UAV"));
            if (v.flag == StatusFlag::UavDocked) {
                const int host = fleet.host_ugv(j);
                if (host < 0) return fail(describe(j, "docked UAV without a group UGV"));
                if (geom::dist(v.pos_km, x.vehicles[static_cast<std::size_t>(host)].pos_km) >
                    pos_tol_km)
                    return fail(describe(j, "docked UAV away from its host"));
            }
        }
    }
    // Pad bookkeeping: each UGV flag counts its group's docked UAVs.
    for (std::size_t g = 0; g < fleet.size(); ++g) {
        if (!fleet.is_ugv(g)) continue;
        int docked = 0;
        for (std::size_t j : fleet.uavs_of_group(fleet.members[g].group))
            if (x.vehicles[j].flag == StatusFlag::UavDocked) ++docked;
        if (docked > 2) return fail(describe(g, "more than two UAVs docked"));
        if (docked != core::docked_count(x.vehicles[g].flag))
            return fail(describe(g, "UGV dock count does not match flags"));
    }
    return true;
}

ContinuousOracle::ContinuousOracle(Fleet fleet, EnergyModel model, RoadGeometry road,
                                   OracleOptions opts)
    : fleet_(std::move(fleet)), model_(model), road_(std::move(road)), opts_(std::move(opts)) {}

bool ContinuousOracle::at_depot(Vec2 p) const {
    for (Vec2 d : opts_.depot_positions)
        if (geom::dist(p, d) <= opts_.pos_tol_km) return true;
    return false;
}

bool ContinuousOracle::operator()(const SystemState& x, double dur_s,
                                  const SystemState& next) const {
    return check(x, dur_s, next, nullptr);
}

bool ContinuousOracle::check(const SystemState& x, double dur_s, const SystemState& next,
                             std::string* why) const {
    auto fail = [&](const std::string& msg) {
        if (why) *why = msg;
        return false;
    };
    if (!(dur_s > 0.0)) return fail("non-positive duration");
    std::string sub;
    if (!state_invariants_ok(fleet_, model_, road_, x, opts_.pos_tol_km, opts_.energy_tol_kj, &sub))
        return fail("source state: " + sub);
    if (!state_invariants_ok(fleet_, model_, road_, next, opts_.pos_tol_km, opts_.energy_tol_kj,
                             &sub))
        return fail("target state: " + sub);
    if (opts_.check_time && std::abs(next.time_s - (x.time_s + dur_s)) > 1e-6)
        return fail("timestamp does not advance by the label");

    for (std::size_t j = 0; j < fleet_.size(); ++j) {
        const auto& a = x.vehicles[j];
        const auto& b = next.vehicles[j];
        const bool ugv = fleet_.is_ugv(j);
        const double d_km = ugv ? road_.along_road_distance(a.pos_km, b.pos_km)
                                : geom::dist(a.pos_km, b.pos_km);
        const double v_max = model_.max_speed(fleet_.members[j].cls);
        if (d_km * 1000.0 > v_max * dur_s + 1e-6)
            return fail(describe(j, "displacement exceeds speed limit"));

        const double delta = b.energy_kj - a.energy_kj;
        if (ugv) {
            const bool swap = opts_.allow_depot_swap && at_depot(a.pos_km) && at_depot(b.pos_km) &&
                              d_km <= opts_.pos_tol_km;
            if (!swap) {
                const double need = min_transition_energy(model_, VehicleClass::Ugv, d_km, dur_s);
                if (delta > -need + opts_.energy_tol_kj)
                    return fail(describe(j, "UGV spends less than the physics minimum"));
            }
            // A swap may raise the level arbitrarily up to capacity (bounds already checked).
        } else {
            const bool charging_possible = a.flag == StatusFlag::UavDocked || at_depot(a.pos_km);
            const double need = min_transition_energy(model_, VehicleClass::Uav, d_km, dur_s);
            if (charging_possible) {
                const double max_gain = integrate_charge(model_, a.energy_kj, dur_s) - a.energy_kj;
                if (delta > max_gain + opts_.energy_tol_kj)
                    return fail(describe(j, "UAV gains more than the charging curve allows"));
            } else {
                if (delta > -need + opts_.energy_tol_kj)
                    return fail(describe(j, "UAV energy increases without a charger"));
            }
        }
    }
    return true;
}

core::TransitionOracle ContinuousOracle::as_oracle() const {
    return [this](const SystemState& x, double dur, const SystemState& next) {
        return check(x, dur, next, nullptr);
    };
}

}  // namespace iterplan::vehicle
