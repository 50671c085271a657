#include "iterplan/sampler/quantize.hpp"

#include <cmath>

namespace iterplan::sampler {

QuantizedEnergy quantize_energy(const EnergyModel& model, double cruise_v_a, double cruise_v_g,
                                double gamma_d_s, int b_max_a, int b_max_g) {
    if (gamma_d_s <= 0.0) throw std::invalid_argument("gamma_d must be positive");
    if (b_max_a < 1 || b_max_g < 1) throw std::invalid_argument("level counts must be positive");
    if (cruise_v_a <= 0.0 || cruise_v_a > model.v_a_max || cruise_v_g <= 0.0 ||
        cruise_v_g > model.v_g_max)
        throw std::invalid_argument("cruise speed outside vehicle limits");

    QuantizedEnergy q;
    q.b_max_a = b_max_a;
    q.b_max_g = b_max_g;
    q.unit_a_kj = model.b_uav_kj / b_max_a;
    q.unit_g_kj = model.b_ugv_kj / b_max_g;

    const double move_a = vehicle::move_energy(model, vehicle::VehicleClass::Uav, cruise_v_a, gamma_d_s);
    const double move_g = vehicle::move_energy(model, vehicle::VehicleClass::Ugv, cruise_v_g, gamma_d_s);
    q.b_move_a = static_cast<int>(std::ceil(move_a / q.unit_a_kj));
    q.b_move_g = static_cast<int>(std::ceil(move_g / q.unit_g_kj));
    if (q.b_move_a > b_max_a) throw VehicleCannotMoveError("UAV cannot afford one step");
    if (q.b_move_g > b_max_g) throw VehicleCannotMoveError("UGV cannot afford one step");

    const double charge_step = model.charge_rate_flat_w * gamma_d_s / 1000.0;  // linear regime
    q.b_charge_a = static_cast<int>(std::floor(charge_step / q.unit_a_kj));

    // Highest start level at which a full quantized gain stays below the true
    // charging curve; above it the taper makes the credited gain optimistic.
    q.charge_cap_a = -1;
    for (int level = b_max_a - q.b_charge_a; level >= 0; --level) {
        const double start = level * q.unit_a_kj;
        const double target = (level + q.b_charge_a) * q.unit_a_kj;
        if (target <= vehicle::integrate_charge(model, start, gamma_d_s) + 1e-9) {
            q.charge_cap_a = level;
            break;
        }
    }
    return q;
}

}  // namespace iterplan::sampler
