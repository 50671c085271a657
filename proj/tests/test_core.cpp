#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "iterplan/core/monotonicity.hpp"
#include "iterplan/core/ordering.hpp"
#include "iterplan/core/spec.hpp"
#include "iterplan/core/trajectory.hpp"

using namespace iterplan;
using namespace iterplan::core;

namespace {

SystemState one_vehicle(double x, double y, double e, double t,
                        StatusFlag flag = StatusFlag::UavFree) {
    SystemState s;
    s.time_s = t;
    s.vehicles.push_back({{x, y}, e, flag});
    return s;
}

}  // namespace

TEST_CASE("trajectory validation") {
    const TransitionOracle accept_all = [](const SystemState&, double, const SystemState&) {
        return true;
    };
    SUBCASE("single state is vacuously valid") {
        Trajectory t;
        t.states.push_back(one_vehicle(0, 0, 1, 0));
        CHECK(validate_trajectory(accept_all, t));
    }
    SUBCASE("oracle rejection fails validation") {
        Trajectory t;
        t.states.push_back(one_vehicle(0, 0, 1, 0));
        t.states.push_back(one_vehicle(1, 0, 0.5, 300));
        t.labels.push_back({300});
        const TransitionOracle reject = [](const SystemState&, double, const SystemState&) {
            return false;
        };
        CHECK(validate_trajectory(accept_all, t));
        CHECK_FALSE(validate_trajectory(reject, t));
    }
    SUBCASE("length mismatch is a structural error") {
        Trajectory t;
        t.states.push_back(one_vehicle(0, 0, 1, 0));
        t.labels.push_back({300});
        CHECK_THROWS_AS(validate_trajectory(accept_all, t), StructuralError);
    }
}

TEST_CASE("output behavior of a straight segment") {
    Trajectory t;
    t.states.push_back(one_vehicle(0, 0, 100, 0));
    t.states.push_back(one_vehicle(1.5, 0, 50, 300));
    t.labels.push_back({300});
    const Implementation impl = implement_trajectory(t);
    const Output mid = output_behavior(impl, 150.0);
    CHECK(mid[0].x == doctest::Approx(0.75));
    CHECK(mid[0].y == doctest::Approx(0.0));
    // Boundary evaluation returns the trajectory state exactly.
    const Output end = output_behavior(impl, 300.0);
    CHECK(end[0].x == 1.5);
    CHECK_THROWS_AS(output_behavior(impl, 301.0), std::domain_error);
}

TEST_CASE("implementation breakpoints, truncation, suffix") {
    Trajectory t;
    t.states.push_back(one_vehicle(0, 0, 100, 0));
    t.states.push_back(one_vehicle(3.0, 0, 40, 600));
    t.labels.push_back({600});
    Implementation impl = implement_trajectory(t);
    impl.insert_breakpoint(200.0);
    CHECK(impl.segments().size() == 2);
    CHECK(impl.total_duration() == doctest::Approx(600.0));
    const auto mid = impl.at(200.0);
    CHECK(mid.vehicles[0].pos_km.x == doctest::Approx(1.0));
    CHECK(mid.vehicles[0].energy_kj == doctest::Approx(80.0));

    Implementation tail = impl.after(300.0);
    CHECK(tail.total_duration() == doctest::Approx(300.0));
    CHECK(tail.initial_state().time_s == doctest::Approx(300.0));
    CHECK(tail.initial_state().vehicles[0].pos_km.x == doctest::Approx(1.5));

    impl.truncate(200.0);
    CHECK(impl.total_duration() == doctest::Approx(200.0));
}

TEST_CASE("charging segment follows the injected closed form") {
    Trajectory t;
    auto a = one_vehicle(2, 2, 100, 0);
    auto b = one_vehicle(2, 2, 150, 300);
    t.states = {a, b};
    t.labels = {{300}};
    const auto charge = [](double e0, double dt) { return e0 + 0.2 * dt; };  // 0.2 kJ/s ramp
    const Implementation impl = implement_trajectory(t, {{Activity::ChargeCurve}}, charge);
    CHECK(impl.at(100.0).vehicles[0].energy_kj == doctest::Approx(120.0));
    // The endpoint cap wins near the end of the segment.
    CHECK(impl.at(290.0).vehicles[0].energy_kj == doctest::Approx(150.0));
    CHECK(impl.at(300.0).vehicles[0].energy_kj == doctest::Approx(150.0));
}

TEST_CASE("state comparison is a partial order") {
    const auto base = one_vehicle(1, 1, 10, 100);
    CHECK(compare_states(base, base) == PartialOrderResult::Equal);

    auto richer = base;
    richer.vehicles[0].energy_kj += 1.0;
    CHECK(compare_states(richer, base) == PartialOrderResult::GreaterOrEqual);
    CHECK(compare_states(base, richer) == PartialOrderResult::LessOrEqual);

    // Earlier time ranks higher.
    auto earlier = base;
    earlier.time_s = 50;
    CHECK(compare_states(earlier, base) == PartialOrderResult::GreaterOrEqual);

    // Conflicting improvements are incomparable.
    auto conflicted = base;
    conflicted.vehicles[0].energy_kj += 1.0;
    conflicted.time_s = 200;
    CHECK(compare_states(conflicted, base) == PartialOrderResult::Incomparable);

    auto moved = base;
    moved.vehicles[0].pos_km.x += 0.5;
    CHECK(compare_states(moved, base) == PartialOrderResult::Incomparable);

    SystemState other_shape;
    CHECK_THROWS_AS(compare_states(base, other_shape), StructuralError);
}

TEST_CASE("partial order properties on random triples") {
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> energy(0.0, 10.0);
    std::uniform_int_distribution<int> coin(0, 1);
    auto random_state = [&](bool same_pos) {
        auto s = one_vehicle(same_pos ? 1.0 : energy(rng), 1.0, energy(rng), energy(rng));
        return s;
    };
    for (int trial = 0; trial < 500; ++trial) {
        const bool same = coin(rng) == 1;
        const auto a = random_state(same);
        const auto b = random_state(same);
        const auto c = random_state(same);
        // Reflexivity.
        CHECK(compare_states(a, a) == PartialOrderResult::Equal);
        // Antisymmetry: mutual dominance forces equality of the compared fields.
        if (compare_states(a, b) == PartialOrderResult::GreaterOrEqual &&
            compare_states(b, a) == PartialOrderResult::GreaterOrEqual) {
            CHECK(std::abs(a.vehicles[0].energy_kj - b.vehicles[0].energy_kj) <= 1e-9);
            CHECK(std::abs(a.time_s - b.time_s) <= 1e-9);
        }
        // Transitivity.
        auto ge = [](PartialOrderResult r) {
            return r == PartialOrderResult::GreaterOrEqual || r == PartialOrderResult::Equal;
        };
        if (ge(compare_states(a, b)) && ge(compare_states(b, c)))
            CHECK(ge(compare_states(a, c)));
    }
}

namespace {

SampledGeometry make_geometry(const std::vector<Vec2>& positions,
                              const std::vector<SpecClasses::Edge>& edges) {
    return SampledGeometry{positions, edges, {}};
}

}  // namespace

TEST_CASE("assignment classification") {
    const std::vector<Vec2> nodes{{0, 0}, {1.5, 0}, {3.0, 0}};
    const std::vector<SpecClasses::Edge> edges{{0, 1}, {1, 0}, {1, 2}, {2, 1}};

    SUBCASE("site on a node forms a key state class") {
        TaskSiteAssignment xi;
        xi.classes.push_back({{1.5, 0.0005}, 1e-3});
        const auto spec = classify_assignment(make_geometry(nodes, edges), xi);
        REQUIRE(spec.key_state_classes.size() == 1);
        CHECK(spec.key_transition_classes.empty());
        CHECK(spec.key_state_classes[0].witness_nodes == std::vector<int>{1});
    }
    SUBCASE("site between nodes forms a key transition class with both directions") {
        TaskSiteAssignment xi;
        xi.classes.push_back({{0.75, 0.0}, 1e-3});
        const auto spec = classify_assignment(make_geometry(nodes, edges), xi);
        REQUIRE(spec.key_transition_classes.size() == 1);
        CHECK(spec.key_state_classes.empty());
        CHECK(spec.key_transition_classes[0].witness_edges.size() == 2);
    }
    SUBCASE("unreachable site raises the unsatisfiable-class error") {
        TaskSiteAssignment xi;
        xi.classes.push_back({{10.0, 10.0}, 1e-3});
        CHECK_THROWS_AS(classify_assignment(make_geometry(nodes, edges), xi),
                        UnsatisfiableClassError);
    }
}

TEST_CASE("specification satisfaction") {
    const std::vector<Vec2> nodes{{0, 0}, {1.5, 0}, {3.0, 0}};
    const std::vector<SpecClasses::Edge> edges{{0, 1}, {1, 0}, {1, 2}, {2, 1}};
    TaskSiteAssignment xi;
    xi.classes.push_back({{1.5, 0.0}, 1e-3});   // node hit
    xi.classes.push_back({{2.25, 0.0}, 1e-3});  // mid-edge hit
    const auto spec = classify_assignment(make_geometry(nodes, edges), xi);

    Trajectory t;
    t.states.push_back(one_vehicle(0, 0, 5, 0));
    t.states.push_back(one_vehicle(1.5, 0, 4, 300));
    t.states.push_back(one_vehicle(3.0, 0, 3, 600));
    t.labels = {{300}, {300}};
    CHECK(satisfies_specification(t, spec, xi));

    Trajectory missing;
    missing.states.push_back(one_vehicle(0, 0, 5, 0));
    missing.states.push_back(one_vehicle(1.5, 0, 4, 300));
    missing.labels = {{300}};
    CHECK_FALSE(satisfies_specification(missing, spec, xi));

    SUBCASE("empty specification is vacuously satisfied") {
        CHECK(satisfies_specification(missing, SpecClasses{}, TaskSiteAssignment{}));
    }
    SUBCASE("energy lifts preserve satisfaction") {
        std::mt19937_64 rng(3);
        std::uniform_real_distribution<double> lift(0.0, 5.0);
        for (int trial = 0; trial < 100; ++trial) {
            Trajectory lifted = t;
            for (auto& s : lifted.states) s.vehicles[0].energy_kj += lift(rng);
            CHECK(satisfies_specification(lifted, spec, xi));
        }
    }
}

TEST_CASE("monotonicity check") {
    SUBCASE("single state with a self loop") {
        EnumerableSystem sys;
        sys.states.push_back(one_vehicle(0, 0, 1, 0));
        sys.label_s = 300;
        sys.has_transition = [](int, int) { return true; };
        const auto report = check_monotonicity(
            sys, [](const SystemState& a, const SystemState& b) { return compare_states(a, b); });
        CHECK(report.monotone());
    }
    SUBCASE("a deliberately missing inherited transition is reported") {
        // States 0,1 share a position; 1 has more energy. 0 -> 2 exists but 1 -> 2
        // does not, so 1 fails to inherit.
        EnumerableSystem sys;
        sys.states.push_back(one_vehicle(0, 0, 1, 0));
        sys.states.push_back(one_vehicle(0, 0, 2, 0));
        sys.states.push_back(one_vehicle(1, 0, 0.5, 0));
        sys.label_s = 300;
        sys.has_transition = [](int a, int b) { return a == 0 && b == 2; };
        const auto report = check_monotonicity(
            sys, [](const SystemState& a, const SystemState& b) { return compare_states(a, b); });
        REQUIRE(report.violations.size() == 1);
        CHECK(report.violations[0].x1 == 0);
        CHECK(report.violations[0].x1_next == 2);
        CHECK(report.violations[0].x2 == 1);
    }
    SUBCASE("budget exhaustion reports partial coverage") {
        EnumerableSystem sys;
        for (int i = 0; i < 6; ++i) sys.states.push_back(one_vehicle(0, 0, i, 0));
        sys.label_s = 1;
        sys.has_transition = [](int, int) { return true; };
        MonotonicityOptions opts;
        opts.max_checks = 3;
        const auto report = check_monotonicity(
            sys, [](const SystemState& a, const SystemState& b) { return compare_states(a, b); },
            opts);
        CHECK_FALSE(report.complete);
        CHECK(report.checked_fraction < 1.0);
        CHECK(report.checked_fraction > 0.0);
    }
    SUBCASE("serial and parallel agree") {
        EnumerableSystem sys;
        for (int i = 0; i < 5; ++i)
            for (int e = 0; e < 3; ++e) sys.states.push_back(one_vehicle(i * 1.0, 0, e, 0));
        sys.label_s = 1;
        sys.has_transition = [](int a, int b) { return (a + b) % 3 != 0; };
        const StateOrder order = [](const SystemState& a, const SystemState& b) {
            return compare_states(a, b);
        };
        const auto serial = check_monotonicity(sys, order, {.parallel = false});
        const auto parallel = check_monotonicity(sys, order, {.parallel = true});
        REQUIRE(serial.violations.size() == parallel.violations.size());
        for (std::size_t i = 0; i < serial.violations.size(); ++i) {
            CHECK(serial.violations[i].x1 == parallel.violations[i].x1);
            CHECK(serial.violations[i].x1_next == parallel.violations[i].x1_next);
            CHECK(serial.violations[i].x2 == parallel.violations[i].x2);
        }
    }
}
