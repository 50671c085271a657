#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "iterplan/vehicle/energy.hpp"
#include "iterplan/vehicle/oracle.hpp"

using namespace iterplan;
using namespace iterplan::vehicle;

namespace {

const EnergyModel kModel;

// Reference integrator for the charging ODE, independent of the closed form.
double rk4_charge(double e0, double dt, double h = 0.05) {
    double e = e0;
    double t = 0.0;
    auto f = [&](double energy) {
        return charge_power(kModel, std::min(energy, kModel.b_uav_kj)) / 1000.0;
    };
    while (t < dt) {
        const double step = std::min(h, dt - t);
        const double k1 = f(e);
        const double k2 = f(e + 0.5 * step * k1);
        const double k3 = f(e + 0.5 * step * k2);
        const double k4 = f(e + step * k3);
        e = std::min(e + step * (k1 + 2 * k2 + 2 * k3 + k4) / 6.0, kModel.b_uav_kj);
        t += step;
    }
    return e;
}

}  // namespace

TEST_CASE("ground power curve") {
    CHECK(ugv_power(kModel, 0.0) == 200.0);  // exact
    CHECK(ugv_power(kModel, 4.5) == doctest::Approx(1.05 * (464.8 * 4.5 + 356.3)));
    CHECK(ugv_power(kModel, 4.5) == doctest::Approx(2570.295));
    CHECK(ugv_power(kModel, 4.0) == doctest::Approx(2326.275));
    CHECK_THROWS_AS(ugv_power(kModel, -0.1), std::domain_error);
    CHECK_THROWS_AS(ugv_power(kModel, 4.6), std::domain_error);
}

TEST_CASE("air power curve") {
    CHECK(uav_power(kModel, 0.0) == doctest::Approx(241.08));
    CHECK(uav_power(kModel, 16.0) == doctest::Approx(251.01).epsilon(1e-4));
    CHECK(uav_power(kModel, 5.0) == doctest::Approx(221.96685));
    CHECK_THROWS_AS(uav_power(kModel, 16.1), std::domain_error);
    // Strictly positive everywhere, increasing on the upper speed range.
    double prev = 0.0;
    for (double v = 0.0; v <= 16.0 + 1e-9; v += 0.1) {
        const double p = uav_power(kModel, std::min(v, 16.0));
        CHECK(p > 0.0);
        if (v >= 10.0) CHECK(p >= prev);
        prev = p;
    }
}

TEST_CASE("charge curve continuity at the knee") {
    CHECK(charge_power(kModel, 0.0) == doctest::Approx(310.8));
    CHECK(charge_power(kModel, kModel.b_uav_kj) == doctest::Approx(0.0));
    const double below = charge_power(kModel, 270.4);
    const double above = charge_power(kModel, 270.4 + 1e-9);
    CHECK(std::abs(below - above) < 0.05);
    CHECK(std::abs(17.965 * (287.7 - 270.4) - 310.8) < 0.05);
}

TEST_CASE("charging closed form") {
    CHECK(integrate_charge(kModel, 0.0, 300.0) == doctest::Approx(93.24));
    CHECK(integrate_charge(kModel, kModel.b_uav_kj, 1234.0) == doctest::Approx(287.7));
    const double expected = 287.7 - 17.3 * std::exp(-0.017965 * 300.0);
    CHECK(integrate_charge(kModel, 270.4, 300.0) == doctest::Approx(expected));
    CHECK(integrate_charge(kModel, 270.4, 300.0) == doctest::Approx(287.62).epsilon(1e-4));

    // Monotone in dt and capped at capacity.
    double prev = 0.0;
    for (double dt = 0.0; dt <= 2000.0; dt += 50.0) {
        const double e = integrate_charge(kModel, 100.0, dt);
        CHECK(e >= prev - 1e-12);
        CHECK(e <= kModel.b_uav_kj + 1e-12);
        prev = e;
    }
}

TEST_CASE("closed form matches RK4 within 0.1 percent") {
    for (double e0 : {0.0, 100.0, 270.4, 280.0}) {
        for (double dt : {60.0, 300.0, 3600.0}) {
            const double closed = integrate_charge(kModel, e0, dt);
            const double numeric = rk4_charge(e0, dt);
            CHECK(std::abs(closed - numeric) / std::max(numeric, 1e-9) < 1e-3);
        }
    }
}

TEST_CASE("move energy") {
    CHECK(move_energy(kModel, core::VehicleClass::Uav, 5.0, 300.0) == doctest::Approx(66.590055));
    CHECK(move_energy(kModel, core::VehicleClass::Ugv, 0.0, 300.0) == doctest::Approx(60.0));
    CHECK(move_energy(kModel, core::VehicleClass::Uav, 7.0, 0.0) == 0.0);
}

TEST_CASE("minimum transition energy") {
    // Stationary: free flight for UAVs (perched), idle draw for the rover.
    CHECK(min_transition_energy(kModel, core::VehicleClass::Uav, 0.0, 300.0) ==
          doctest::Approx(0.0));
    CHECK(min_transition_energy(kModel, core::VehicleClass::Ugv, 0.0, 300.0) ==
          doctest::Approx(60.0));
    // Unreachable displacement.
    CHECK(std::isinf(min_transition_energy(kModel, core::VehicleClass::Uav, 5.0, 300.0)));
    // Never exceeds the constant-speed-over-the-whole-step cost.
    const double all_step = move_energy(kModel, core::VehicleClass::Uav, 5.0, 300.0);
    CHECK(min_transition_energy(kModel, core::VehicleClass::Uav, 1.5, 300.0) <= all_step);
    CHECK(min_transition_energy(kModel, core::VehicleClass::Uav, 1.5, 300.0) > 0.0);
}

namespace {

core::Fleet two_vehicle_fleet() {
    core::Fleet f;
    f.members.push_back({core::VehicleClass::Ugv, kModel.b_ugv_kj, 0});
    f.members.push_back({core::VehicleClass::Uav, kModel.b_uav_kj, 0});
    return f;
}

core::SystemState make_state(double t, geom::Vec2 gpos, double ge, geom::Vec2 apos, double ae,
                             bool docked) {
    core::SystemState x;
    x.time_s = t;
    x.vehicles.push_back({gpos, ge, docked ? core::StatusFlag::UgvOneDocked
                                           : core::StatusFlag::UgvNoDock});
    x.vehicles.push_back({apos, ae, docked ? core::StatusFlag::UavDocked
                                           : core::StatusFlag::UavFree});
    return x;
}

}  // namespace

TEST_CASE("continuous transition oracle") {
    geom::RoadGeometry road({geom::Polyline({{0, 10}, {10, 10}})});
    vehicle::OracleOptions opts;
    opts.depot_positions = {{0, 10}};
    ContinuousOracle oracle(two_vehicle_fleet(), kModel, road, opts);

    const auto x0 = make_state(0, {5, 10}, 20000, {5, 12}, 200, false);

    SUBCASE("idle step with idle draw is valid") {
        auto x1 = make_state(300, {5, 10}, 20000 - 60.0, {5, 12}, 200, false);
        std::string why;
        CHECK(oracle.check(x0, 300, x1, &why));
    }
    SUBCASE("time must advance by the label") {
        auto x1 = make_state(250, {5, 10}, 20000 - 60.0, {5, 12}, 200, false);
        CHECK_FALSE(oracle(x0, 300, x1));
    }
    SUBCASE("displacement beyond max speed is rejected") {
        // 5 km in 300 s needs 16.7 m/s.
        auto x1 = make_state(300, {5, 10}, 19940, {5, 17}, 120, false);
        CHECK_FALSE(oracle(x0, 300, x1));
    }
    SUBCASE("4.8 km within one step is achievable") {
        auto x1 = make_state(300, {5, 10}, 19940, {5, 16.8}, 120, false);
        CHECK(oracle(x0, 300, x1));
    }
    SUBCASE("energy never appears for free") {
        auto x1 = make_state(300, {5, 10}, 19940, {5, 12}, 210, false);
        CHECK_FALSE(oracle(x0, 300, x1));
    }
    SUBCASE("docked UAV must sit on its host") {
        auto bad = make_state(0, {5, 10}, 20000, {6, 10}, 200, true);
        auto next = make_state(300, {5, 10}, 19940, {6, 10}, 200, true);
        CHECK_FALSE(oracle(bad, 300, next));
    }
    SUBCASE("docked charging follows the charge curve cap") {
        auto a = make_state(0, {5, 10}, 20000, {5, 10}, 200, true);
        const double gain_ok = integrate_charge(kModel, 200, 300) - 200;
        auto b = make_state(300, {5, 10}, 20000 - 200, {5, 10}, 200 + gain_ok - 1e-4, true);
        CHECK(oracle(a, 300, b));
        auto too_much = make_state(300, {5, 10}, 20000 - 200, {5, 10}, 200 + gain_ok + 1.0, true);
        CHECK_FALSE(oracle(a, 300, too_much));
    }
    SUBCASE("battery swap allowed while parked at a depot") {
        auto a = make_state(0, {0, 10}, 5000, {5, 12}, 200, false);
        auto b = make_state(300, {0, 10}, kModel.b_ugv_kj, {5, 12}, 200, false);
        CHECK(oracle(a, 300, b));
    }
}
