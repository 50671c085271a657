#include "iterplan/bench/oracle.hpp"

#include <chrono>

namespace iterplan::bench {

OracleOutcome optimal_oracle(const sampler::SampledSystem& system, const core::SpecClasses& spec,
                             const core::TaskSiteAssignment& sites, const core::SystemState& x0,
                             int k_max, double timeout_s, std::uint64_t seed) {
    const auto t0 = std::chrono::steady_clock::now();
    auto remaining = [&] {
        return timeout_s -
               std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    };

    OracleOutcome out;
    tdo::TdoInstance inst{&system, &spec, &sites, x0, 1};
    const int k_lo = std::min(std::max(1, tdo::coverage_hop_lower_bound(inst)), std::max(1, k_max));
    out.best_bound = k_lo - 1;  // the hop bound already excludes anything below

    for (int k = k_lo; k <= k_max; ++k) {
        if (remaining() <= 0.0) break;
        inst.horizon_steps = k;
        tdo::EncodedTdo enc = tdo::encode_tdo(inst);
        const auto opts = tdo::make_tdo_options(enc, inst, remaining(), seed);
        const csolve::SolveResult res = csolve::check_sat(enc.problem, opts);
        if (res.unsat()) {
            out.best_bound = k;
            continue;
        }
        if (res.sat()) {
            out.kind = OracleOutcome::Kind::Plan;
            out.plan = tdo::decode_tdo(enc, inst, res.model);
            out.horizon = k;
            out.proven_minimal = out.best_bound == k - 1;
            out.elapsed_s =
                std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
            return out;
        }
        break;  // timeout inside the solver
    }
    out.elapsed_s = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    if (out.best_bound >= k_max && remaining() > 0.0) out.kind = OracleOutcome::Kind::Infeasible;
    return out;
}

}  // namespace iterplan::bench
