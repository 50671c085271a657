#include "iterplan/core/trajectory.hpp"

#include <algorithm>
#include <cmath>

namespace iterplan::core {

bool validate_trajectory(const TransitionOracle& system, const Trajectory& traj) {
    traj.check_structure();
    for (std::size_t k = 0; k < traj.labels.size(); ++k)
        if (!system(traj.states[k], traj.labels[k].duration_s, traj.states[k + 1])) return false;
    return true;
}

Implementation::Implementation(std::vector<Segment> segments, ChargeFn charge)
    : segments_(std::move(segments)), charge_(std::move(charge)) {
    for (auto& s : segments_) {
        if (!(s.duration_s > 0.0)) throw StructuralError("non-positive segment duration");
        if (s.activities.empty()) s.activities.assign(s.from.vehicles.size(), Activity::MoveLinear);
        if (s.activities.size() != s.from.vehicles.size())
            throw StructuralError("activity count mismatch");
        total_ += s.duration_s;
    }
    for (std::size_t i = 1; i < segments_.size(); ++i) {
        const auto& prev = segments_[i - 1].to;
        const auto& next = segments_[i].from;
        if (prev.vehicles.size() != next.vehicles.size())
            throw StructuralError("segment fleet mismatch");
        for (std::size_t j = 0; j < prev.vehicles.size(); ++j)
            if (dist(prev.vehicles[j].pos_km, next.vehicles[j].pos_km) > 1e-9)
                throw StructuralError("segment endpoints do not chain");
    }
}

SystemState Implementation::initial_state() const {
    if (segments_.empty()) throw StructuralError("empty implementation");
    return segments_.front().from;
}

SystemState Implementation::final_state() const {
    if (segments_.empty()) throw StructuralError("empty implementation");
    return segments_.back().to;
}

namespace {

SystemState eval_segment(const Implementation::Segment& seg, double t,
                         const Implementation::ChargeFn& charge) {
    const double T = seg.duration_s;
    const double u = std::clamp(t / T, 0.0, 1.0);
    SystemState out = seg.from;
    out.time_s = seg.from.time_s + t;
    for (std::size_t j = 0; j < out.vehicles.size(); ++j) {
        const auto& a = seg.from.vehicles[j];
        const auto& b = seg.to.vehicles[j];
        auto& v = out.vehicles[j];
        switch (seg.activities[j]) {
            case Activity::MoveLinear:
                v.pos_km = lerp(a.pos_km, b.pos_km, u);
                v.energy_kj = a.energy_kj + (b.energy_kj - a.energy_kj) * u;
                break;
            case Activity::Hold:
                v.pos_km = a.pos_km;
                v.energy_kj = a.energy_kj + (b.energy_kj - a.energy_kj) * u;
                break;
            case Activity::ChargeCurve: {
                v.pos_km = a.pos_km;
                double e = charge ? charge(a.energy_kj, t)
                                  : a.energy_kj + (b.energy_kj - a.energy_kj) * u;
                // Never overshoot the endpoint the trajectory promises.
                if (b.energy_kj >= a.energy_kj) e = std::min(e, b.energy_kj);
                v.energy_kj = (t >= T) ? b.energy_kj : e;
                break;
            }
        }
        if (t >= T) {
            v.pos_km = b.pos_km;
            v.energy_kj = b.energy_kj;
            v.flag = b.flag;
        }
    }
    return out;
}

}  // namespace

SystemState Implementation::at(double gamma_s) const {
    if (segments_.empty()) throw StructuralError("empty implementation");
    if (gamma_s < -1e-9 || gamma_s > total_ + 1e-9)
        throw std::domain_error("timestamp outside implementation domain");
    gamma_s = std::clamp(gamma_s, 0.0, total_);
    double acc = 0.0;
    for (const auto& seg : segments_) {
        if (gamma_s <= acc + seg.duration_s || &seg == &segments_.back())
            return eval_segment(seg, gamma_s - acc, charge_);
        acc += seg.duration_s;
    }
    return segments_.back().to;  // unreachable
}

void Implementation::insert_breakpoint(double gamma_s) {
    if (gamma_s <= 1e-9 || gamma_s >= total_ - 1e-9) return;
    double acc = 0.0;
    for (std::size_t i = 0; i < segments_.size(); ++i) {
        const double end = acc + segments_[i].duration_s;
        if (gamma_s < end - 1e-9) {
            if (gamma_s > acc + 1e-9) {
                const SystemState mid = eval_segment(segments_[i], gamma_s - acc, charge_);
                Segment tail = segments_[i];
                tail.from = mid;
                tail.duration_s = end - gamma_s;
                segments_[i].to = mid;
                segments_[i].duration_s = gamma_s - acc;
                segments_.insert(segments_.begin() + static_cast<std::ptrdiff_t>(i) + 1, tail);
            }
            return;
        }
        acc = end;
    }
}

std::vector<double> Implementation::boundaries() const {
    std::vector<double> out{0.0};
    double acc = 0.0;
    for (const auto& seg : segments_) {
        acc += seg.duration_s;
        out.push_back(acc);
    }
    return out;
}

void Implementation::truncate(double gamma_s) {
    if (gamma_s >= total_ - 1e-9) return;
    insert_breakpoint(gamma_s);
    double acc = 0.0;
    std::size_t keep = 0;
    for (; keep < segments_.size(); ++keep) {
        if (acc + segments_[keep].duration_s > gamma_s + 1e-9) break;
        acc += segments_[keep].duration_s;
    }
    segments_.resize(keep);
    total_ = acc;
}

Implementation Implementation::after(double gamma_s) const {
    Implementation copy = *this;
    if (gamma_s <= 1e-9) return copy;
    if (gamma_s >= total_ - 1e-9) {
        // Degenerate suffix: hold the final state for a moment.
        Segment hold;
        hold.from = final_state();
        hold.to = hold.from;
        hold.to.time_s += 1.0;
        hold.duration_s = 1.0;
        hold.activities.assign(hold.from.vehicles.size(), Activity::Hold);
        return Implementation({hold}, charge_);
    }
    copy.insert_breakpoint(gamma_s);
    double acc = 0.0;
    std::size_t drop = 0;
    for (; drop < copy.segments_.size(); ++drop) {
        if (acc + copy.segments_[drop].duration_s > gamma_s + 1e-9) break;
        acc += copy.segments_[drop].duration_s;
    }
    copy.segments_.erase(copy.segments_.begin(),
                         copy.segments_.begin() + static_cast<std::ptrdiff_t>(drop));
    copy.total_ = 0.0;
    for (const auto& s : copy.segments_) copy.total_ += s.duration_s;
    return copy;
}

Output output_behavior(const Implementation& impl, double gamma_s) {
    return output_of(impl.at(gamma_s));
}

Implementation implement_trajectory(const Trajectory& traj,
                                    const std::vector<std::vector<Activity>>& activities,
                                    Implementation::ChargeFn charge) {
    traj.check_structure();
    std::vector<Implementation::Segment> segs;
    segs.reserve(traj.labels.size());
    for (std::size_t k = 0; k < traj.labels.size(); ++k) {
        Implementation::Segment s;
        s.from = traj.states[k];
        s.to = traj.states[k + 1];
        s.duration_s = traj.labels[k].duration_s;
        if (k < activities.size()) s.activities = activities[k];
        segs.push_back(std::move(s));
    }
    return Implementation(std::move(segs), std::move(charge));
}

std::vector<double> sweep_times(const Implementation& impl, double max_dt_s) {
    std::vector<double> out;
    const auto bounds = impl.boundaries();
    for (std::size_t i = 0; i + 1 < bounds.size(); ++i) {
        const double a = bounds[i];
        const double b = bounds[i + 1];
        const int n = std::max(1, static_cast<int>(std::ceil((b - a) / max_dt_s)));
        for (int s = 0; s < n; ++s) out.push_back(a + (b - a) * s / n);
    }
    out.push_back(bounds.back());
    return out;
}

}  // namespace iterplan::core
