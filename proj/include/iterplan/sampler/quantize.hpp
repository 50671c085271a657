#pragma once

#include "iterplan/vehicle/energy.hpp"

namespace iterplan::sampler {

using vehicle::EnergyModel;

// Conservative level bookkeeping: depletion rounds up, gain rounds down, and
// charging is only credited while the linear transfer regime still covers a
// whole gained step (charge_cap_a is the highest start level that qualifies).
struct QuantizedEnergy {
    int b_max_a = 0;
    int b_max_g = 0;
    int b_move_a = 0;
    int b_move_g = 0;
    int b_charge_a = 0;
    int charge_cap_a = 0;
    double unit_a_kj = 0.0;  // kJ per UAV level
    double unit_g_kj = 0.0;  // kJ per UGV level
};

struct VehicleCannotMoveError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

QuantizedEnergy quantize_energy(const EnergyModel& model, double cruise_v_a, double cruise_v_g,
                                double gamma_d_s, int b_max_a, int b_max_g);

}  // namespace iterplan::sampler
