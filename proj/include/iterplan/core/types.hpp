#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "iterplan/geom/geometry.hpp"

namespace iterplan::core {

using geom::Vec2;

// Transition label: a strictly positive time duration in seconds.
struct Label {
    double duration_s = 0.0;
};

enum class VehicleClass : std::uint8_t { Ugv, Uav };

// Vehicle status byte. UGV values count docked UAVs; UAV values tell whether
// the vehicle currently sits on a ground-vehicle charging pad.
enum class StatusFlag : std::uint8_t {
    UgvNoDock = 0,
    UgvOneDocked = 1,
    UgvTwoDocked = 2,
    UavFree = 3,
    UavDocked = 4,
};

inline bool is_ugv_flag(StatusFlag f) { return static_cast<int>(f) <= 2; }
inline int docked_count(StatusFlag f) {
    if (!is_ugv_flag(f)) throw std::invalid_argument("docked_count on a UAV flag");
    return static_cast<int>(f);
}

struct VehicleState {
    Vec2 pos_km;
    double energy_kj = 0.0;
    StatusFlag flag = StatusFlag::UavFree;
};

struct SystemState {
    std::vector<VehicleState> vehicles;
    double time_s = 0.0;
};

// Output space: per-vehicle planar positions.
using Output = std::vector<Vec2>;

inline Output output_of(const SystemState& x) {
    Output y;
    y.reserve(x.vehicles.size());
    for (const auto& v : x.vehicles) y.push_back(v.pos_km);
    return y;
}

// Static fleet composition shared by every state of a mission.
struct Fleet {
    struct Member {
        VehicleClass cls = VehicleClass::Uav;
        double capacity_kj = 0.0;
        int group = 0;  // UAVs dock only on their group's UGV
    };
    std::vector<Member> members;

    std::size_t size() const { return members.size(); }
    bool is_ugv(std::size_t j) const { return members[j].cls == VehicleClass::Ugv; }
    bool is_uav(std::size_t j) const { return members[j].cls == VehicleClass::Uav; }

    // Index of the UGV in the same group as vehicle j, or -1 if none.
    int host_ugv(std::size_t j) const {
        for (std::size_t g = 0; g < members.size(); ++g)
            if (is_ugv(g) && members[g].group == members[j].group) return static_cast<int>(g);
        return -1;
    }

    std::vector<std::size_t> uavs_of_group(int group) const {
        std::vector<std::size_t> out;
        for (std::size_t j = 0; j < members.size(); ++j)
            if (is_uav(j) && members[j].group == group) out.push_back(j);
        return out;
    }
};

struct StructuralError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

}  // namespace iterplan::core
