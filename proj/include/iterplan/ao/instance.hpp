#pragma once

#include "iterplan/planner/plan.hpp"
#include "iterplan/sampler/sampled_system.hpp"

namespace iterplan::ao {

using sampler::SampledSystem;

struct AoNode {
    enum class Kind : std::uint8_t { Start, Visit, Depot, Rendezvous, AnchorWp };
    Kind kind = Kind::AnchorWp;
    geom::Vec2 pos_km;
    double window_s = 0.0;  // Rendezvous: charge-window start timestamp
    int site_class = -1;    // Visit: index into the assignment
    int depot_index = -1;
    int host_ugv = -1;      // Rendezvous: vehicle index of the pad owner
};

// Single-UAV refinement problem over the coordinates the team plan touches:
// owned task sites, depots, the host UGV's stationary charge windows, and the
// agent's own team-plan waypoints as fallback anchors.
struct AoInstance {
    std::size_t agent = 0;  // vehicle index in the fleet
    std::vector<AoNode> nodes;  // node 0 is Start
    double gamma_d_s = 300.0;
    double start_time_s = 0.0;
    double energy0_kj = 0.0;
    double capacity_kj = 0.0;
    double v_free_mps = 16.0;
    double charge_step_kj = 0.0;  // conservative gain per charge step
    double charge_cap_kj = 0.0;   // highest pre-charge level a step may start from
    double horizon_s = 0.0;       // upper bound on timestamps

    std::vector<int> anchor_route;  // node indices reproducing the team plan

    double phi_s(int i, int j) const {  // transit seconds at free-flight speed
        return geom::dist(nodes[static_cast<std::size_t>(i)].pos_km,
                          nodes[static_cast<std::size_t>(j)].pos_km) *
               1000.0 / v_free_mps;
    }
    double psi_kj(int i, int j) const;  // transit energy at free-flight speed

    std::vector<int> visit_nodes() const;
};

// Class ownership: which vehicle first covers each key class in the team plan.
// Returns one entry per assignment class: the covering vehicle index (or -1).
std::vector<int> class_ownership(const planner::Plan& team_plan, const core::SpecClasses& spec,
                                 const core::TaskSiteAssignment& sites);

// Builds the per-agent subproblem from the accepted team plan.
AoInstance extract_agent_subproblem(const planner::Plan& team_plan, std::size_t agent,
                                    const SampledSystem& system, const core::SpecClasses& spec,
                                    const core::TaskSiteAssignment& sites);

}  // namespace iterplan::ao
