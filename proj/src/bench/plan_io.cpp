#include "iterplan/bench/plan_io.hpp"

#include <fstream>
#include <sstream>

#include "iterplan/vehicle/energy.hpp"

namespace iterplan::bench {

std::string format_plan(const planner::Plan& plan) {
    std::ostringstream os;
    os.precision(12);
    const auto& impl = plan.implementation;
    os << "plan v1\n";
    os << "producer " << (plan.producer.empty() ? "unknown" : plan.producer) << "\n";
    os << "objective " << plan.objective_s << "\n";
    const auto& segs = impl.segments();
    const std::size_t agents = segs.empty() ? 0 : segs.front().from.vehicles.size();
    os << "agents " << agents << "\n";
    auto emit_state = [&](const core::SystemState& x) {
        os << "t " << x.time_s << "\n";
        for (std::size_t j = 0; j < x.vehicles.size(); ++j) {
            const auto& v = x.vehicles[j];
            os << "wp " << j << " " << v.pos_km.x << " " << v.pos_km.y << " " << v.energy_kj
               << " " << static_cast<int>(v.flag) << "\n";
        }
    };
    if (!segs.empty()) {
        emit_state(segs.front().from);
        for (const auto& seg : segs) emit_state(seg.to);
    }
    return os.str();
}

void save_plan(const planner::Plan& plan, const std::string& path) {
    std::ofstream f(path);
    if (!f) throw PlanFileError("cannot write " + path);
    f << format_plan(plan);
}

planner::Plan parse_plan(std::istream& in, const Scenario& scenario) {
    planner::Plan plan;
    std::string line;
    if (!std::getline(in, line) || line.rfind("plan v1", 0) != 0)
        throw PlanFileError("missing plan v1 header");
    std::size_t agents = 0;
    std::vector<core::SystemState> states;
    core::SystemState current;
    bool open = false;
    while (std::getline(in, line)) {
        std::istringstream ls(line);
        std::string key;
        if (!(ls >> key)) continue;
        if (key == "producer") {
            ls >> plan.producer;
        } else if (key == "objective") {
            ls >> plan.objective_s;
        } else if (key == "agents") {
            ls >> agents;
        } else if (key == "t") {
            if (open) {
                if (current.vehicles.size() != agents)
                    throw PlanFileError("waypoint row count mismatch");
                states.push_back(current);
            }
            current = core::SystemState{};
            if (!(ls >> current.time_s)) throw PlanFileError("bad timestamp line");
            open = true;
        } else if (key == "wp") {
            std::size_t j;
            core::VehicleState v;
            int flag;
            if (!(ls >> j >> v.pos_km.x >> v.pos_km.y >> v.energy_kj >> flag))
                throw PlanFileError("bad waypoint line");
            if (j != current.vehicles.size()) throw PlanFileError("waypoint order mismatch");
            v.flag = static_cast<core::StatusFlag>(flag);
            current.vehicles.push_back(v);
        } else {
            throw PlanFileError("unknown plan key " + key);
        }
    }
    if (open) {
        if (current.vehicles.size() != agents) throw PlanFileError("waypoint row count mismatch");
        states.push_back(current);
    }
    if (states.size() < 2) throw PlanFileError("plan needs at least two timestamps");
    if (agents != scenario.fleet.size()) throw PlanFileError("agent count does not match scenario");

    core::Trajectory traj;
    traj.states = states;
    for (std::size_t i = 1; i < states.size(); ++i) {
        const double d = states[i].time_s - states[i - 1].time_s;
        if (d <= 0) throw PlanFileError("timestamps must increase");
        traj.labels.push_back({d});
    }
    std::vector<std::vector<core::Activity>> acts;
    for (std::size_t k = 0; k + 1 < states.size(); ++k) {
        std::vector<core::Activity> step;
        for (std::size_t j = 0; j < agents; ++j) {
            const auto& a = states[k].vehicles[j];
            const auto& b = states[k + 1].vehicles[j];
            if (geom::dist(a.pos_km, b.pos_km) > 1e-9)
                step.push_back(core::Activity::MoveLinear);
            else if (b.energy_kj > a.energy_kj + 1e-9)
                step.push_back(core::Activity::ChargeCurve);
            else
                step.push_back(core::Activity::Hold);
        }
        acts.push_back(std::move(step));
    }
    const vehicle::EnergyModel model;
    plan.trajectory = traj;
    plan.implementation = core::implement_trajectory(
        traj, acts, [model](double e0, double dt) { return vehicle::integrate_charge(model, e0, dt); });
    if (plan.objective_s <= 0.0) plan.objective_s = states.back().time_s;
    return plan;
}

planner::Plan load_plan(const std::string& path, const Scenario& scenario) {
    std::ifstream f(path);
    if (!f) throw PlanFileError("cannot open " + path);
    return parse_plan(f, scenario);
}

}  // namespace iterplan::bench
