#include "iterplan/core/monotonicity.hpp"

#include <atomic>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace iterplan::core {

namespace {

// Violations for all transitions out of source state x1.
void check_source(const EnumerableSystem& sys, int x1,
                  const std::vector<std::vector<int>>& dominators,
                  std::vector<MonotonicityViolation>& out, std::uint64_t& checks) {
    const int n = static_cast<int>(sys.states.size());
    for (int x1p = 0; x1p < n; ++x1p) {
        if (!sys.has_transition(x1, x1p)) continue;
        for (int x2 : dominators[static_cast<std::size_t>(x1)]) {
            ++checks;
            if (!sys.has_transition(x2, x1p)) out.push_back({x1, x1p, x2});
        }
    }
}

}  // namespace

MonotonicityReport check_monotonicity(const EnumerableSystem& sys, const StateOrder& order,
                                      const MonotonicityOptions& opts) {
    MonotonicityReport report;
    const int n = static_cast<int>(sys.states.size());
    if (n == 0) return report;

    // Dominator lists first; the order can be the expensive part.
    std::vector<std::vector<int>> dominators(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            if (i == j) continue;
            const auto r = order(sys.states[static_cast<std::size_t>(j)],
                                 sys.states[static_cast<std::size_t>(i)]);
            if (r == PartialOrderResult::GreaterOrEqual || r == PartialOrderResult::Equal)
                dominators[static_cast<std::size_t>(i)].push_back(j);
        }

    std::uint64_t total_pairs = 0;
    for (int x1 = 0; x1 < n; ++x1) {
        std::uint64_t out_deg = 0;
        for (int x1p = 0; x1p < n; ++x1p)
            if (sys.has_transition(x1, x1p)) ++out_deg;
        total_pairs += out_deg * dominators[static_cast<std::size_t>(x1)].size();
    }
    if (total_pairs == 0) return report;

    if (total_pairs > opts.max_checks) {
        // Partial serial scan up to the budget.
        std::uint64_t checks = 0;
        for (int x1 = 0; x1 < n && checks < opts.max_checks; ++x1)
            check_source(sys, x1, dominators, report.violations, checks);
        report.complete = false;
        report.checked_fraction = static_cast<double>(checks) / static_cast<double>(total_pairs);
        return report;
    }

    if (opts.parallel) {
#ifdef _OPENMP
        std::vector<std::vector<MonotonicityViolation>> per_source(static_cast<std::size_t>(n));
        std::atomic<std::uint64_t> checks{0};
#pragma omp parallel for schedule(dynamic, 4)
        for (int x1 = 0; x1 < n; ++x1) {
            std::uint64_t local = 0;
            check_source(sys, x1, dominators, per_source[static_cast<std::size_t>(x1)],
                         local);
            checks += local;
        }
        for (auto& v : per_source)
            report.violations.insert(report.violations.end(), v.begin(), v.end());
        return report;
#endif
    }

    std::uint64_t checks = 0;
    for (int x1 = 0; x1 < n; ++x1)
        check_source(sys, x1, dominators, report.violations, checks);
    return report;
}

}  // namespace iterplan::core
