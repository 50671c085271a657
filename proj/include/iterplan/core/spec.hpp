#pragma once

#include <span>

#include "iterplan/core/trajectory.hpp"
#include "iterplan/core/types.hpp"

namespace iterplan::core {

// Disc-shaped output class: some vehicle within radius of the site.
struct OutputClass {
    Vec2 site_km;
    double radius_km = 1e-3;  // 1 m

    bool contains_point(Vec2 p) const { return dist(p, site_km) <= radius_km; }
    bool contains(const Output& y) const {
        for (Vec2 p : y)
            if (contains_point(p)) return true;
        return false;
    }
};

struct TaskSiteAssignment {
    std::vector<OutputClass> classes;

    std::size_t size() const { return classes.size(); }
    bool empty() const { return classes.empty(); }
};

// Key classes of an assignment relative to a sampled system: classes reachable
// at sampled positions become state classes, classes reachable only mid-edge
// become transition classes.
struct SpecClasses {
    struct StateClass {
        int class_index = -1;
        std::vector<int> witness_nodes;  // sampled positions whose output enters the class
    };
    struct Edge {
        int from = -1;
        int to = -1;
    };
    struct TransitionClass {
        int class_index = -1;
        std::vector<Edge> witness_edges;  // directed edges whose segment crosses the class
    };

    std::vector<StateClass> key_state_classes;
    std::vector<TransitionClass> key_transition_classes;

    std::size_t total() const { return key_state_classes.size() + key_transition_classes.size(); }
};

struct UnsatisfiableClassError : std::runtime_error {
    int class_index;
    explicit UnsatisfiableClassError(int idx)
        : std::runtime_error("task site class " + std::to_string(idx) +
                             " reachable by no sampled state or transition"),
          class_index(idx) {}
};

// Geometric view of a sampled system: positions plus traversable directed edges.
struct SampledGeometry {
    std::span<const Vec2> positions;               // node id -> position
    std::span<const SpecClasses::Edge> edges;      // traversable in one step (both directions listed)
    std::span<const Vec2> extra_positions;         // injected anchor positions, also sampled outputs
};

SpecClasses classify_assignment(const SampledGeometry& geometry, const TaskSiteAssignment& xi);

// Condition (1)+(2) of a specification: the trajectory touches every key state
// class at some state and every key transition class along some step, assuming
// straight-line constant-speed motion between consecutive states.
bool satisfies_specification(const Trajectory& traj, const SpecClasses& spec,
                             const TaskSiteAssignment& xi);

}  // namespace iterplan::core
