#pragma once

#include <memory>

#include "iterplan/core/trajectory.hpp"
#include "iterplan/geom/geometry.hpp"
#include "iterplan/vehicle/energy.hpp"

namespace iterplan::vehicle {

using core::Fleet;
using core::StatusFlag;
using core::SystemState;
using geom::RoadGeometry;
using geom::Vec2;

// Per-state consistency: battery bounds, rover on the road, docking pairs
// co-located with correct pad counts.
bool state_invariants_ok(const Fleet& fleet, const EnergyModel& model, const RoadGeometry& road,
                         const SystemState& x, double pos_tol_km = 1.5e-3,
                         double energy_tol_kj = 1e-6, std::string* why = nullptr);

struct OracleOptions {
    double energy_tol_kj = 1e-6;
    double pos_tol_km = 1.5e-3;
    bool check_time = true;  // enforce x'.time = x.time + l
    bool allow_depot_swap = true;
    std::vector<Vec2> depot_positions;  // swap/charge locations on the road
};

// Transition relation of the continuous multi-vehicle system. A step is valid
// when every vehicle's displacement fits its speed limit (rover along the road,
// rotorcraft point-to-point), every battery delta is explainable by the power
// curves — at least the minimum consumption spent, never more gained than the
// charging curve allows — and dock states stay coherent.
class ContinuousOracle {
public:
    ContinuousOracle(Fleet fleet, EnergyModel model, RoadGeometry road, OracleOptions opts = {});

    bool operator()(const SystemState& x, double dur_s, const SystemState& next) const;
    bool check(const SystemState& x, double dur_s, const SystemState& next,
               std::string* why) const;

    core::TransitionOracle as_oracle() const;

    const Fleet& fleet() const { return fleet_; }
    const EnergyModel& model() const { return model_; }
    const RoadGeometry& road() const { return road_; }
    const OracleOptions& options() const { return opts_; }

private:
    bool at_depot(Vec2 p) const;

    Fleet fleet_;
    EnergyModel model_;
    RoadGeometry road_;
    OracleOptions opts_;
};

}  // namespace iterplan::vehicle
