#include "iterplan/vehicle/energy.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace iterplan::vehicle {

double ugv_power(const EnergyModel& m, double v_mps) {
    if (v_mps < 0.0 || v_mps > m.v_g_max + 1e-12)
        throw std::domain_error("ugv speed outside [0, v_g_max]");
    if (v_mps == 0.0) return m.idle_ugv_w;
    return 1.05 * (464.8 * v_mps + 356.3);
}

double uav_power(const EnergyModel& m, double v_mps) {
    if (v_mps < 0.0 || v_mps > m.v_a_max + 1e-12)
        throw std::domain_error("uav speed outside [0, v_a_max]");
    const double v = v_mps;
    return 1.05 * (0.0461 * v * v * v - 0.5834 * v * v - 1.8761 * v + 229.6);
}

double charge_power(const EnergyModel& m, double e_kj) {
    if (e_kj < -1e-9 || e_kj > m.b_uav_kj + 1e-9)
        throw std::domain_error("battery level outside [0, capacity]");
    e_kj = std::clamp(e_kj, 0.0, m.b_uav_kj);
    if (e_kj <= m.charge_knee_kj) return m.charge_rate_flat_w;
    return m.charge_coeff_w_per_kj * (m.b_uav_kj - e_kj);
}

double integrate_charge(const EnergyModel& m, double e0_kj, double dt_s) {
    if (e0_kj < -1e-9 || e0_kj > m.b_uav_kj + 1e-9)
        throw std::domain_error("battery level outside [0, capacity]");
    if (dt_s < 0.0) throw std::domain_error("negative charge duration");
    e0_kj = std::clamp(e0_kj, 0.0, m.b_uav_kj);
    const double rate_kj_s = m.charge_rate_flat_w / 1000.0;
    double t = dt_s;
    double e = e0_kj;
    if (e < m.charge_knee_kj) {
        const double t_knee = (m.charge_knee_kj - e) / rate_kj_s;
        if (t <= t_knee) return std::min(e + rate_kj_s * t, m.b_uav_kj);
        e = m.charge_knee_kj;
        t -= t_knee;
    }
    // dE/dt = c*(B - E)/1000 above the knee.
    const double c = m.charge_coeff_w_per_kj / 1000.0;
    const double final_e = m.b_uav_kj - (m.b_uav_kj - e) * std::exp(-c * t);
    return std::clamp(final_e, e0_kj, m.b_uav_kj);
}

double move_energy(const EnergyModel& m, VehicleClass cls, double v_mps, double dt_s) {
    if (dt_s < 0.0) throw std::domain_error("negative duration");
    const double p = cls == VehicleClass::Ugv ? ugv_power(m, v_mps) : uav_power(m, v_mps);
    return p * dt_s / 1000.0;
}

double min_transition_energy(const EnergyModel& m, VehicleClass cls, double d_km, double dt_s) {
    if (dt_s <= 0.0) return d_km <= 1e-12 ? 0.0 : std::numeric_limits<double>::infinity();
    const double d_m = d_km * 1000.0;
    const double v_max = m.max_speed(cls);
    if (d_m > v_max * dt_s + 1e-6) return std::numeric_limits<double>::infinity();
    const double idle_w = cls == VehicleClass::Ugv ? m.idle_ugv_w : 0.0;
    if (d_m <= 1e-9) return idle_w * dt_s / 1000.0;
    const double v_lo = std::max(d_m / dt_s, 1e-3);
    double best = std::numeric_limits<double>::infinity();
    // Grid scan over the admissible constant travel speed; the curves are smooth
    // and the 1e-3 m/s resolution is far below any tolerance used against this.
    const int steps = 2000;
    for (int i = 0; i <= steps; ++i) {
        const double v = v_lo + (v_max - v_lo) * i / steps;
        if (v <= 0.0) continue;
        const double t_move = d_m / v;
        const double p = cls == VehicleClass::Ugv ? ugv_power(m, v) : uav_power(m, v);
        const double e = (p * t_move + idle_w * (dt_s - t_move)) / 1000.0;
        best = std::min(best, e);
    }
    return best;
}

}  // namespace iterplan::vehicle
