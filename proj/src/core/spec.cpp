#include "iterplan/core/spec.hpp"

namespace iterplan::core {

SpecClasses classify_assignment(const SampledGeometry& geometry, const TaskSiteAssignment& xi) {
    SpecClasses out;
    for (int c = 0; c < static_cast<int>(xi.classes.size()); ++c) {
        const OutputClass& cls = xi.classes[c];
        SpecClasses::StateClass sc;
        sc.class_index = c;
        for (int n = 0; n < static_cast<int>(geometry.positions.size()); ++n)
            if (cls.contains_point(geometry.positions[n])) sc.witness_nodes.push_back(n);
        bool injected_hit = false;
        for (const Vec2& p : geometry.extra_positions)
            if (cls.contains_point(p)) injected_hit = true;
        if (!sc.witness_nodes.empty() || injected_hit) {
            out.key_state_classes.push_back(std::move(sc));
            continue;
        }
        SpecClasses::TransitionClass tc;
        tc.class_index = c;
        for (const auto& e : geometry.edges) {
            const Vec2 a = geometry.positions[static_cast<std::size_t>(e.from)];
            const Vec2 b = geometry.positions[static_cast<std::size_t>(e.to)];
            if (geom::point_segment_distance(cls.site_km, a, b) <= cls.radius_km)
                tc.witness_edges.push_back(e);
        }
        if (tc.witness_edges.empty()) throw UnsatisfiableClassError(c);
        out.key_transition_classes.push_back(std::move(tc));
    }
    return out;
}

bool satisfies_specification(const Trajectory& traj, const SpecClasses& spec,
                             const TaskSiteAssignment& xi) {
    traj.check_structure();
    for (const auto& sc : spec.key_state_classes) {
        const OutputClass& cls = xi.classes.at(static_cast<std::size_t>(sc.class_index));
        bool hit = false;
        for (const auto& x : traj.states)
            if (cls.contains(output_of(x))) {
                hit = true;
                break;
            }
        if (!hit) return false;
    }
    for (const auto& tc : spec.key_transition_classes) {
        const OutputClass& cls = xi.classes.at(static_cast<std::size_t>(tc.class_index));
        bool hit = false;
        for (std::size_t k = 0; k < traj.labels.size() && !hit; ++k) {
            const auto& a = traj.states[k];
            const auto& b = traj.states[k + 1];
            for (std::size_t j = 0; j < a.vehicles.size(); ++j) {
                if (geom::point_segment_distance(cls.site_km, a.vehicles[j].pos_km,
                                                 b.vehicles[j].pos_km) <= cls.radius_km) {
                    hit = true;
                    break;
                }
            }
        }
        if (!hit) return false;
    }
    return true;
}

}  // namespace iterplan::core
