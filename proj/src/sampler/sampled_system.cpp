#include "iterplan/sampler/sampled_system.hpp"

#include <algorithm>
#include <cmath>

namespace iterplan::sampler {

int SampledSystem::node_near(geom::Vec2 p, double tol_km) const {
    int best = -1;
    double best_d = tol_km;
    for (const auto& n : nodes) {
        const double d = geom::dist(n.pos_km, p);
        if (d <= best_d) {
            best_d = d;
            best = n.id;
        }
    }
    return best;
}

bool SampledSystem::is_depot_node(int id) const {
    return std::find(depot_ids.begin(), depot_ids.end(), id) != depot_ids.end();
}

int SampledSystem::level_floor(VehicleClass cls, double e_kj) const {
    const double u = unit_kj(cls);
    int lvl = static_cast<int>(std::floor(e_kj / u + 1e-9));
    return std::clamp(lvl, 0, max_level(cls));
}

bool SampledSystem::node_allowed(VehicleClass cls, int id) const {
    if (id < 0 || id >= static_cast<int>(nodes.size())) return false;
    if (cls == VehicleClass::Ugv) return nodes[static_cast<std::size_t>(id)].on_road();
    return true;
}

const std::vector<int>& SampledSystem::adjacency(VehicleClass cls, int id) const {
    return cls == VehicleClass::Ugv ? adj_road.at(static_cast<std::size_t>(id))
                                    : adj_air.at(static_cast<std::size_t>(id));
}

std::optional<std::vector<int>> SampledSystem::nodes_of_state(const SystemState& x,
                                                              double tol_km) const {
    std::vector<int> ids;
    ids.reserve(x.vehicles.size());
    for (std::size_t j = 0; j < x.vehicles.size(); ++j) {
        const int id = node_near(x.vehicles[j].pos_km, tol_km);
        if (id < 0 || !node_allowed(fleet.members[j].cls, id)) return std::nullopt;
        ids.push_back(id);
    }
    return ids;
}

bool SampledSystem::is_sampled_state(const SystemState& x) const {
    // Grid state: every vehicle on a node at an integer battery level.
    if (auto ids = nodes_of_state(x)) {
        bool quantized = true;
        for (std::size_t j = 0; j < x.vehicles.size(); ++j) {
            const double u = unit_kj(fleet.members[j].cls);
            const double lvl = x.vehicles[j].energy_kj / u;
            if (std::abs(lvl - std::round(lvl)) > 1e-6) quantized = false;
        }
        if (quantized) return true;
    }
    // Otherwise it must be one of the injected anchor samples.
    for (const auto& inj : injected_states) {
        if (std::abs(inj.time_s - x.time_s) > 1e-6) continue;
        bool same = inj.vehicles.size() == x.vehicles.size();
        for (std::size_t j = 0; same && j < x.vehicles.size(); ++j) {
            same = geom::dist(inj.vehicles[j].pos_km, x.vehicles[j].pos_km) <= 1e-6 &&
                   std::abs(inj.vehicles[j].energy_kj - x.vehicles[j].energy_kj) <= 1e-6;
        }
        if (same) return true;
    }
    return false;
}

vehicle::ContinuousOracle SampledSystem::continuous_oracle(bool check_time) const {
    vehicle::OracleOptions opts;
    opts.check_time = check_time;
    opts.depot_positions = depot_positions;
    return vehicle::ContinuousOracle(fleet, model, road, opts);
}

core::TransitionOracle SampledSystem::member_relation() const {
    auto oracle = std::make_shared<vehicle::ContinuousOracle>(continuous_oracle(true));
    return [this, oracle](const SystemState& x, double dur, const SystemState& next) {
        return is_sampled_state(x) && is_sampled_state(next) && (*oracle)(x, dur, next);
    };
}

core::TransitionOracle SampledSystem::quantized_relation() const {
    return [this](const SystemState& x, double dur, const SystemState& next) {
        if (std::abs(dur - gamma_d_s) > 1e-6) return false;
        if (std::abs(next.time_s - (x.time_s + gamma_d_s)) > 1e-6) return false;
        const auto ids = nodes_of_state(x);
        const auto ids_next = nodes_of_state(next);
        if (!ids || !ids_next) return false;

        // Docked counts must match flags at both ends.
        for (const SystemState* st : {&x, &next}) {
            for (std::size_t g = 0; g < fleet.size(); ++g) {
                if (!fleet.is_ugv(g)) continue;
                int docked = 0;
                for (std::size_t j : fleet.uavs_of_group(fleet.members[g].group))
                    if (st->vehicles[j].flag == core::StatusFlag::UavDocked) ++docked;
                if (docked > 2 || docked != core::docked_count(st->vehicles[g].flag)) return false;
            }
        }

        for (std::size_t j = 0; j < fleet.size(); ++j) {
            const VehicleClass cls = fleet.members[j].cls;
            const double u = unit_kj(cls);
            const double raw_a = x.vehicles[j].energy_kj / u;
            const double raw_b = next.vehicles[j].energy_kj / u;
            if (std::abs(raw_a - std::round(raw_a)) > 1e-6 ||
                std::abs(raw_b - std::round(raw_b)) > 1e-6)
                return false;
            const int lvl_a = static_cast<int>(std::round(raw_a));
            const int lvl_b = static_cast<int>(std::round(raw_b));
            if (lvl_a < 0 || lvl_a > max_level(cls) || lvl_b < 0 || lvl_b > max_level(cls))
                return false;
            const int n0 = (*ids)[j];
            const int n1 = (*ids_next)[j];
            const bool moved = n0 != n1;
            const int delta = lvl_b - lvl_a;

            if (cls == VehicleClass::Ugv) {
                if (moved) {
                    const auto& adj = adj_road[static_cast<std::size_t>(n0)];
                    if (std::find(adj.begin(), adj.end(), n1) == adj.end()) return false;
                }
                int charging = 0;
                for (std::size_t i : fleet.uavs_of_group(fleet.members[j].group))
                    if (x.vehicles[i].flag == core::StatusFlag::UavDocked) ++charging;
                const int expect = -charging * levels.b_charge_a - (moved ? levels.b_move_g : 0);
                if (delta != expect) return false;
            } else {
                const bool s0 = x.vehicles[j].flag == core::StatusFlag::UavDocked;
                const bool s1 = next.vehicles[j].flag == core::StatusFlag::UavDocked;
                const int host = fleet.host_ugv(j);
                if (host < 0 && (s0 || s1)) return false;
                if (s0 && n0 != (*ids)[static_cast<std::size_t>(host)]) return false;
                if (s1 && n1 != (*ids_next)[static_cast<std::size_t>(host)]) return false;
                const bool riding = s0 && s1;
                if (moved && !riding) {
                    const auto& adj = adj_air[static_cast<std::size_t>(n0)];
                    if (std::find(adj.begin(), adj.end(), n1) == adj.end()) return false;
                }
                const bool charge_src = s0 || is_depot_node(n0);
                const int gain = (charge_src && lvl_a <= levels.charge_cap_a) ? levels.b_charge_a : 0;
                bool ok = false;
                if (charge_src) {
                    if (delta == gain - levels.b_move_a && (moved || riding)) ok = true;
                    if (delta == gain && (!moved || riding)) ok = true;
                } else {
                    if (moved && delta == -levels.b_move_a) ok = true;
                    if (!moved && delta == 0) ok = true;
                }
                if (!ok) return false;
            }
        }
        return true;
    };
}

core::SampledGeometry SampledSystem::geometry() const {
    return {position_cache_, edge_cache_, injected_position_cache_};
}

core::SpecClasses SampledSystem::classify(const core::TaskSiteAssignment& xi) const {
    return core::classify_assignment(geometry(), xi);
}

core::Trajectory SampledSystem::anchor_trajectory() const {
    core::Trajectory traj;
    traj.states = injected_states;
    for (std::size_t i = 1; i < injected_states.size(); ++i)
        traj.labels.push_back({injected_states[i].time_s - injected_states[i - 1].time_s});
    return traj;
}

void SampledSystem::finalize() {
    position_cache_.clear();
    for (const auto& n : nodes) position_cache_.push_back(n.pos_km);
    edge_cache_.clear();
    for (int i = 0; i < static_cast<int>(nodes.size()); ++i)
        for (int q : adj_air[static_cast<std::size_t>(i)]) edge_cache_.push_back({i, q});
    injected_position_cache_.clear();
    for (const auto& st : injected_states)
        for (const auto& v : st.vehicles) injected_position_cache_.push_back(v.pos_km);
}

core::EnumerableSystem SampledSystem::enumerable_view() const {
    core::EnumerableSystem sys;
    sys.label_s = gamma_d_s;

    // De-quantized combos of (node, level) per vehicle plus coherent dock flags,
    // all at timestamp zero: the partial order then ranks by energy only.
    std::vector<std::vector<std::pair<int, int>>> per_vehicle;  // (node, level)
    for (std::size_t j = 0; j < fleet.size(); ++j) {
        std::vector<std::pair<int, int>> opts;
        for (int n = 0; n < n_grid; ++n) {
            if (!node_allowed(fleet.members[j].cls, n)) continue;
            for (int l = 0; l <= max_level(fleet.members[j].cls); ++l) opts.emplace_back(n, l);
        }
        per_vehicle.push_back(std::move(opts));
    }
    std::vector<std::size_t> idx(fleet.size(), 0);
    while (true) {
        SystemState base;
        base.time_s = 0.0;
        for (std::size_t j = 0; j < fleet.size(); ++j) {
            const auto [n, l] = per_vehicle[j][idx[j]];
            core::VehicleState v;
            v.pos_km = node_pos(n);
            v.energy_kj = l * unit_kj(fleet.members[j].cls);
            v.flag = fleet.is_ugv(j) ? core::StatusFlag::UgvNoDock : core::StatusFlag::UavFree;
            base.vehicles.push_back(v);
        }
        // Expand dock-flag combinations: each co-located (UAV, group UGV) pair
        // may be docked or free.
        std::vector<std::size_t> dockable;
        for (std::size_t j = 0; j < fleet.size(); ++j) {
            if (!fleet.is_uav(j)) continue;
            const int host = fleet.host_ugv(j);
            if (host >= 0 &&
                geom::dist(base.vehicles[j].pos_km,
                           base.vehicles[static_cast<std::size_t>(host)].pos_km) <= 1e-9)
                dockable.push_back(j);
        }
        const std::size_t combos = std::size_t{1} << dockable.size();
        for (std::size_t mask = 0; mask < combos; ++mask) {
            SystemState st = base;
            bool ok = true;
            for (std::size_t b = 0; b < dockable.size(); ++b)
                if (mask & (std::size_t{1} << b))
                    st.vehicles[dockable[b]].flag = core::StatusFlag::UavDocked;
            for (std::size_t g = 0; g < fleet.size() && ok; ++g) {
                if (!fleet.is_ugv(g)) continue;
                int docked = 0;
                for (std::size_t j : fleet.uavs_of_group(fleet.members[g].group))
                    if (st.vehicles[j].flag == core::StatusFlag::UavDocked) ++docked;
                if (docked > 2) ok = false;
                st.vehicles[g].flag = static_cast<core::StatusFlag>(std::min(docked, 2));
            }
            if (ok) sys.states.push_back(std::move(st));
        }
        std::size_t j = 0;
        for (; j < fleet.size(); ++j) {
            if (++idx[j] < per_vehicle[j].size()) break;
            idx[j] = 0;
        }
        if (j == fleet.size()) break;
    }

    // Physics tables keyed by node pair and class, mirroring the continuous
    // oracle with the time dimension projected out.
    const int N = n_grid;
    const double dt = gamma_d_s;
    const double inf = std::numeric_limits<double>::infinity();
    std::vector<double> need_g(static_cast<std::size_t>(N * N), inf);
    std::vector<double> need_a(static_cast<std::size_t>(N * N), inf);
    for (int a = 0; a < N; ++a)
        for (int b = 0; b < N; ++b) {
            const double air = geom::dist(node_pos(a), node_pos(b));
            need_a[static_cast<std::size_t>(a * N + b)] =
                vehicle::min_transition_energy(model, VehicleClass::Uav, air, dt);
            if (nodes[static_cast<std::size_t>(a)].on_road() &&
                nodes[static_cast<std::size_t>(b)].on_road()) {
                const double rd = road.along_road_distance(node_pos(a), node_pos(b));
                need_g[static_cast<std::size_t>(a * N + b)] =
                    vehicle::min_transition_energy(model, VehicleClass::Ugv, rd, dt);
            }
        }

    auto shared = std::make_shared<SampledSystem>(*this);
    auto states = std::make_shared<std::vector<SystemState>>(sys.states);
    auto needs_g = std::make_shared<std::vector<double>>(std::move(need_g));
    auto needs_a = std::make_shared<std::vector<double>>(std::move(need_a));
    auto state_nodes = std::make_shared<std::vector<std::vector<int>>>();
    for (const auto& st : *states) {
        auto ids = nodes_of_state(st);
        state_nodes->push_back(ids ? *ids : std::vector<int>{});
    }

    sys.has_transition = [shared, states, needs_g, needs_a, state_nodes, N, dt](int i, int k) {
        const SystemState& x = (*states)[static_cast<std::size_t>(i)];
        const SystemState& y = (*states)[static_cast<std::size_t>(k)];
        const auto& fleet = shared->fleet;
        const auto& model = shared->model;
        const double tol = 1e-6;
        if ((*state_nodes)[static_cast<std::size_t>(i)].empty() ||
            (*state_nodes)[static_cast<std::size_t>(k)].empty())
            return false;
        for (std::size_t j = 0; j < fleet.size(); ++j) {
            const auto& a = x.vehicles[j];
            const auto& b = y.vehicles[j];
            const int na = (*state_nodes)[static_cast<std::size_t>(i)][j];
            const int nb = (*state_nodes)[static_cast<std::size_t>(k)][j];
            if (na < 0 || nb < 0) return false;
            const bool ugv = fleet.is_ugv(j);
            const double need = ugv ? (*needs_g)[static_cast<std::size_t>(na * N + nb)]
                                    : (*needs_a)[static_cast<std::size_t>(na * N + nb)];
            if (!std::isfinite(need)) return false;  // unreachable within one step
            const double delta = b.energy_kj - a.energy_kj;
            if (ugv) {
                const bool swap = shared->is_depot_node(na) && na == nb;
                if (!swap && delta > -need + tol) return false;
            } else {
                const bool charging = a.flag == core::StatusFlag::UavDocked ||
                                      shared->is_depot_node(na);
                if (charging) {
                    const double cap = vehicle::integrate_charge(model, a.energy_kj, dt) -
                                       a.energy_kj;
                    if (delta > cap + tol) return false;
                } else if (delta > -need + tol) {
                    return false;
                }
            }
        }
        return true;
    };
    return sys;
}

namespace {

// Closest-approach timestamps of any vehicle to any site, per segment.
std::vector<double> site_hit_times(const core::Implementation& impl,
                                   const core::TaskSiteAssignment& xi) {
    std::vector<double> hits;
    double acc = 0.0;
    for (const auto& seg : impl.segments()) {
        for (const auto& cls : xi.classes) {
            for (std::size_t j = 0; j < seg.from.vehicles.size(); ++j) {
                const geom::Vec2 a = seg.from.vehicles[j].pos_km;
                const geom::Vec2 b = seg.to.vehicles[j].pos_km;
                if (geom::point_segment_distance(cls.site_km, a, b) <= cls.radius_km) {
                    const double t = geom::closest_param_on_segment(cls.site_km, a, b);
                    hits.push_back(acc + t * seg.duration_s);
                }
            }
        }
        acc += seg.duration_s;
    }
    return hits;
}

}  // namespace

SampledSystem build_sampled_system(const Scenario& scenario, double gamma_d_s,
                                   const core::Implementation* anchor,
                                   const core::TaskSiteAssignment* anchor_sites,
                                   const core::SystemState* start) {
    SampledSystem sys;
    sys.gamma_d_s = gamma_d_s;
    sys.model = vehicle::EnergyModel{};
    sys.fleet = scenario.core_fleet();
    sys.road = scenario.road_geometry();
    sys.depot_positions = scenario.depot_positions();
    sys.cruise_v_g = scenario.params.spacing_road_km * 1000.0 / gamma_d_s;
    sys.cruise_v_a = scenario.params.pitch_air_km * 1000.0 / gamma_d_s;

    const RoadNodes rn =
        build_road_nodes(sys.road, scenario.params.spacing_road_km, sys.depot_positions);
    sys.nodes = build_air_grid(scenario.map_rect, scenario.params.pitch_air_km, rn.nodes);
    sys.n_road = static_cast<int>(rn.nodes.size());
    sys.n_grid = static_cast<int>(sys.nodes.size());

    sys.levels = quantize_energy(sys.model, sys.cruise_v_a, sys.cruise_v_g, gamma_d_s,
                                 scenario.params.levels_uav, scenario.params.levels_ugv);

    for (int d = 0; d < static_cast<int>(sys.depot_positions.size()); ++d) {
        const int id = sys.node_near(sys.depot_positions[static_cast<std::size_t>(d)], 1e-3);
        if (id < 0) throw ScenarioError("depot", "depot vertex missing from road nodes");
        sys.depot_ids.push_back(id);
    }

    sys.adj_road.assign(sys.nodes.size(), {});
    for (auto [a, b] : rn.edges) {
        sys.adj_road[static_cast<std::size_t>(a)].push_back(b);
        sys.adj_road[static_cast<std::size_t>(b)].push_back(a);
    }
    sys.adj_air.assign(sys.nodes.size(), {});
    const double air_reach = sys.cruise_v_a * gamma_d_s / 1000.0 + 1e-9;
    for (int a = 0; a < sys.n_grid; ++a)
        for (int b = 0; b < sys.n_grid; ++b)
            if (a != b && geom::dist(sys.node_pos(a), sys.node_pos(b)) <= air_reach)
                sys.adj_air[static_cast<std::size_t>(a)].push_back(b);

    if (start) sys.injected_states.push_back(*start);
    if (anchor && !anchor->empty()) {
        std::vector<double> stamps = anchor->boundaries();
        if (anchor_sites)
            for (double t : site_hit_times(*anchor, *anchor_sites)) stamps.push_back(t);
        std::sort(stamps.begin(), stamps.end());
        stamps.erase(std::unique(stamps.begin(), stamps.end(),
                                 [](double a, double b) { return std::abs(a - b) < 1e-6; }),
                     stamps.end());
        for (double t : stamps) sys.injected_states.push_back(anchor->at(t));
    }
    if (!sys.injected_states.empty()) {
        // Positions become extra nodes with one-step adjacency into the grid.
        const double road_reach = sys.cruise_v_g * gamma_d_s / 1000.0 + 1e-9;
        for (const auto& st : sys.injected_states) {
            for (std::size_t j = 0; j < st.vehicles.size(); ++j) {
                const geom::Vec2 p = st.vehicles[j].pos_km;
                if (sys.node_near(p) >= 0) continue;
                const bool ugv = sys.fleet.is_ugv(j);
                SpatialNode node{static_cast<int>(sys.nodes.size()), p,
                                 ugv ? NodeKind::Road : NodeKind::Air};
                sys.nodes.push_back(node);
                sys.adj_road.emplace_back();
                sys.adj_air.emplace_back();
                const int id = node.id;
                for (int q = 0; q < sys.n_grid; ++q) {
                    if (ugv && sys.nodes[static_cast<std::size_t>(q)].on_road() &&
                        sys.road.along_road_distance(p, sys.node_pos(q)) <= road_reach) {
                        sys.adj_road[static_cast<std::size_t>(id)].push_back(q);
                    }
                    if (geom::dist(p, sys.node_pos(q)) <= air_reach)
                        sys.adj_air[static_cast<std::size_t>(id)].push_back(q);
                }
                if (ugv && sys.adj_road[static_cast<std::size_t>(id)].empty())
                    throw FeasibilityInjectionError("injected UGV state unreachable to grid");
                if (!ugv && sys.adj_air[static_cast<std::size_t>(id)].empty())
                    throw FeasibilityInjectionError("injected UAV state unreachable to grid");
            }
        }
    }

    sys.finalize();
    return sys;
}

}  // namespace iterplan::sampler
