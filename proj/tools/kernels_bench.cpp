// Compares the serial reference and OpenMP paths of the data-parallel kernels:
// grid orientation search and the monotonicity enumeration.

#include <chrono>
#include <cstdio>

#include "iterplan/bench/generator.hpp"
#include "iterplan/core/monotonicity.hpp"
#include "iterplan/sampler/sampled_system.hpp"

using namespace iterplan;

namespace {

double now_s() {
    return std::chrono::duration<double>(
               std::chrono::steady_clock::now().time_since_epoch())
        .count();
}

template <typename F>
double timed(F&& f) {
    const double t0 = now_s();
    f();
    return now_s() - t0;
}

}  // namespace

int main() {
    // Orientation search on the reference road.
    const Scenario ref = bench::make_reference_scenario(0);
    const auto road = ref.road_geometry();
    const auto rn = sampler::build_road_nodes(road, ref.params.spacing_road_km,
                                              ref.depot_positions());
    sampler::OrientationSearchOptions serial_opts;
    serial_opts.parallel = false;
    sampler::OrientationSearchOptions parallel_opts;
    parallel_opts.parallel = true;

    sampler::GridPlacement ps{}, pp{};
    const double t_serial = timed([&] {
        ps = sampler::orientation_search(rn.nodes, ref.params.pitch_air_km, serial_opts);
    });
    const double t_parallel = timed([&] {
        pp = sampler::orientation_search(rn.nodes, ref.params.pitch_air_km, parallel_opts);
    });
    const bool same_placement = ps.rotation_deg == pp.rotation_deg &&
                                ps.offset_km == pp.offset_km &&
                                ps.coincidences == pp.coincidences;
    std::printf("orientation_search  serial %8.3fs  parallel %8.3fs  speedup %5.2fx  match %s\n",
                t_serial, t_parallel, t_serial / std::max(t_parallel, 1e-9),
                same_placement ? "yes" : "NO");

    // Monotonicity enumeration on a small two-vehicle system.
    Scenario tiny = bench::make_random_scenario({2, 1, 5.0, 7});
    tiny.params.levels_uav = 3;
    tiny.params.levels_ugv = 3;
    tiny.params.spacing_road_km = 1.2;
    tiny.road_branches = {{{8, 10}, {10.4, 10}}};
    tiny.depots = {{0, 0}};
    tiny.sites = {{9.2, 10}};
    tiny.validate();
    const auto sys = sampler::build_sampled_system(tiny, tiny.params.gamma_d_s);
    const auto view = sys.enumerable_view();
    const core::StateOrder order = [](const core::SystemState& a, const core::SystemState& b) {
        return core::compare_states(a, b);
    };

    core::MonotonicityReport rs, rp;
    const double m_serial = timed([&] {
        rs = core::check_monotonicity(view, order, {.parallel = false});
    });
    const double m_parallel = timed([&] {
        rp = core::check_monotonicity(view, order, {.parallel = true});
    });
    const bool same_report = rs.violations.size() == rp.violations.size();
    std::printf("check_monotonicity  serial %8.3fs  parallel %8.3fs  speedup %5.2fx  match %s"
                "  (states %zu, violations %zu)\n",
                m_serial, m_parallel, m_serial / std::max(m_parallel, 1e-9),
                same_report ? "yes" : "NO", view.states.size(), rs.violations.size());
    return (same_placement && same_report) ? 0 : 1;
}
