#include "iterplan/core/ordering.hpp"

namespace iterplan::core {

PartialOrderResult compare_states(const SystemState& a, const SystemState& b, double pos_tol_km,
                                  double energy_tol_kj, double time_tol_s) {
    if (a.vehicles.size() != b.vehicles.size())
        throw StructuralError("compare_states: fleet shape mismatch");
    for (std::size_t j = 0; j < a.vehicles.size(); ++j)
        if (dist(a.vehicles[j].pos_km, b.vehicles[j].pos_km) > pos_tol_km)
            return PartialOrderResult::Incomparable;

    bool a_ge = true;  // a has >= energy everywhere
    bool b_ge = true;
    for (std::size_t j = 0; j < a.vehicles.size(); ++j) {
        const double ea = a.vehicles[j].energy_kj;
        const double eb = b.vehicles[j].energy_kj;
        if (ea < eb - energy_tol_kj) a_ge = false;
        if (eb < ea - energy_tol_kj) b_ge = false;
    }
    // Earlier timestamp ranks higher.
    bool a_earlier_eq = a.time_s <= b.time_s + time_tol_s;
    bool b_earlier_eq = b.time_s <= a.time_s + time_tol_s;

    const bool a_dom = a_ge && a_earlier_eq;
    const bool b_dom = b_ge && b_earlier_eq;
    if (a_dom && b_dom) return PartialOrderResult::Equal;
    if (a_dom) return PartialOrderResult::GreaterOrEqual;
    if (b_dom) return PartialOrderResult::LessOrEqual;
    return PartialOrderResult::Incomparable;
}

}  // namespace iterplan::core
