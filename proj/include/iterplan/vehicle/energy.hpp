#pragma once

#include <stdexcept>

#include "iterplan/core/types.hpp"

namespace iterplan::vehicle {

using core::VehicleClass;

// Fleet power/charging parameters. Defaults correspond to the studied vehicles:
// a 25.01 MJ ground rover and 287.7 kJ quadrotors with wireless pad charging.
struct EnergyModel {
    double b_ugv_kj = 25010.0;
    double b_uav_kj = 287.7;
    double v_g_max = 4.5;   // m/s
    double v_a_max = 16.0;  // m/s

    double charge_knee_kj = 270.4;     // taper threshold
    double charge_rate_flat_w = 310.8; // below the knee
    double charge_coeff_w_per_kj = 17.965;
    double idle_ugv_w = 200.0;

    double capacity(VehicleClass cls) const {
        return cls == VehicleClass::Ugv ? b_ugv_kj : b_uav_kj;
    }
    double max_speed(VehicleClass cls) const { return cls == VehicleClass::Ugv ? v_g_max : v_a_max; }
};

// Ground vehicle draw in watts: 200 W parked, 1.05*(464.8 v + 356.3) rolling.
double ugv_power(const EnergyModel& m, double v_mps);

// Rotorcraft draw in watts: 1.05*(0.0461 v^3 - 0.5834 v^2 - 1.8761 v + 229.6).
double uav_power(const EnergyModel& m, double v_mps);

// Wireless transfer rate in watts at battery level e_kj: flat below the knee,
// tapering linearly to zero at full charge.
double charge_power(const EnergyModel& m, double e_kj);

// Closed-form battery level after charging for dt seconds from e0: linear ramp
// up to the knee, then exponential approach to full. Clamped to [e0, capacity].
double integrate_charge(const EnergyModel& m, double e0_kj, double dt_s);

// Energy in kJ consumed moving at constant speed v for dt seconds.
double move_energy(const EnergyModel& m, VehicleClass cls, double v_mps, double dt_s);

// Least energy (kJ) a vehicle can spend to displace d km within dt seconds.
// A rotorcraft may fly fast and sit the remainder; the rover keeps its idle
// draw while stopped. Infinite when the displacement is unreachable.
double min_transition_energy(const EnergyModel& m, VehicleClass cls, double d_km, double dt_s);

}  // namespace iterplan::vehicle
