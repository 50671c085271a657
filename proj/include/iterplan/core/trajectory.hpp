#pragma once

#include <functional>
#include <optional>

#include "iterplan/core/types.hpp"

namespace iterplan::core {

// Predicate deciding whether (x, duration, x') is a transition of the host system.
using TransitionOracle = std::function<bool(const SystemState&, double, const SystemState&)>;

struct Trajectory {
    std::vector<SystemState> states;  // length N+1
    std::vector<Label> labels;        // length N

    std::size_t length() const { return labels.size(); }

    void check_structure() const {
        if (states.empty()) throw StructuralError("trajectory has no states");
        if (labels.size() + 1 != states.size())
            throw StructuralError("trajectory label/state length mismatch");
        for (const Label& l : labels)
            if (!(l.duration_s > 0.0)) throw StructuralError("non-positive transition label");
    }
};

// True iff every adjacent (x_k, l_k, x_{k+1}) is accepted by the oracle.
bool validate_trajectory(const TransitionOracle& system, const Trajectory& traj);

// How a vehicle's state evolves within one implementation segment.
enum class Activity : std::uint8_t {
    MoveLinear,   // position interpolates linearly, energy linearly
    ChargeCurve,  // position fixed, energy follows the charging closed form, capped at the endpoint
    Hold,         // position fixed, energy linear (idle draw or constant)
};

// Continuous-time realization of a trajectory. Piecewise evaluation hits the
// segment endpoint states exactly at the cumulative durations.
class Implementation {
public:
    struct Segment {
        SystemState from;
        SystemState to;
        double duration_s = 0.0;
        std::vector<Activity> activities;  // one per vehicle; empty = all MoveLinear
    };

    // Charging closed form e(t) given start energy; injected by the vehicle domain.
    using ChargeFn = std::function<double(double e0_kj, double dt_s)>;

    Implementation() = default;
    explicit Implementation(std::vector<Segment> segments, ChargeFn charge = {});

    const std::vector<Segment>& segments() const { return segments_; }
    double total_duration() const { return total_; }
    bool empty() const { return segments_.empty(); }
    const ChargeFn& charge_fn() const { return charge_; }

    SystemState initial_state() const;
    SystemState final_state() const;

    // State at elapsed time gamma in [0, total_duration].
    SystemState at(double gamma_s) const;

    // Splits the containing segment so gamma becomes a segment boundary.
    void insert_breakpoint(double gamma_s);

    // All segment-boundary timestamps (0, t1, ..., total).
    std::vector<double> boundaries() const;

    // Drops everything after gamma (breakpoint inserted first).
    void truncate(double gamma_s);

    // Suffix from gamma onward; state timestamps keep their absolute values.
    Implementation after(double gamma_s) const;

private:
    std::vector<Segment> segments_;
    ChargeFn charge_;
    double total_ = 0.0;
};

// Output at timestamp gamma of the implementation: H(zeta(gamma)).
Output output_behavior(const Implementation& impl, double gamma_s);

// Builds the straight-line constant-speed implementation of a trajectory.
// Activities may be supplied per step (outer index = step); defaults to MoveLinear.
Implementation implement_trajectory(const Trajectory& traj,
                                    const std::vector<std::vector<Activity>>& activities = {},
                                    Implementation::ChargeFn charge = {});

// Timestamps (boundaries plus <=max_dt interior samples) covering [0, total].
std::vector<double> sweep_times(const Implementation& impl, double max_dt_s);

}  // namespace iterplan::core
