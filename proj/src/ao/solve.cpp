#include "iterplan/ao/solve.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>

namespace iterplan::ao {

namespace {

bool charge_leg(const AoInstance& inst, int i, int j) {
    const auto& a = inst.nodes[static_cast<std::size_t>(i)];
    const auto& b = inst.nodes[static_cast<std::size_t>(j)];
    return a.kind == AoNode::Kind::Rendezvous && b.kind == AoNode::Kind::Rendezvous &&
           geom::dist(a.pos_km, b.pos_km) <= 1e-9 &&
           std::abs(b.window_s - (a.window_s + inst.gamma_d_s)) <= 1e-6;
}

}  // namespace

std::optional<AoSolution> simulate_route(const AoInstance& inst, const std::vector<int>& route) {
    if (route.empty() || route.front() != 0) return std::nullopt;
    AoSolution sol;
    sol.route = route;
    double t = inst.start_time_s;
    double e = inst.energy0_kj;
    sol.times_s.push_back(t);
    sol.energies_kj.push_back(e);
    for (std::size_t k = 0; k + 1 < route.size(); ++k) {
        const int i = route[k];
        const int j = route[k + 1];
        const auto& dst = inst.nodes[static_cast<std::size_t>(j)];
        const double phi = inst.phi_s(i, j);
        const double psi = inst.psi_kj(i, j);
        if (dst.kind == AoNode::Kind::Rendezvous) {
            if (charge_leg(inst, i, j)) {
                if (e <= inst.charge_cap_kj + 1e-9) e += inst.charge_step_kj;
                t = dst.window_s;
            } else {
                if (t + phi > dst.window_s + 1e-6) return std::nullopt;  // window missed
                e -= psi;
                t = dst.window_s;
            }
        } else if (dst.kind == AoNode::Kind::Depot) {
            const double arrive = t + phi;
            e -= psi;
            if (e < -1e-9) return std::nullopt;
            const double start =
                std::ceil(arrive / inst.gamma_d_s - 1e-9) * inst.gamma_d_s;
            if (e <= inst.charge_cap_kj + 1e-9) e += inst.charge_step_kj;
            t = start + inst.gamma_d_s;
        } else {
            t += phi;
            e -= psi;
        }
        if (e < -1e-9) return std::nullopt;
        if (e > inst.capacity_kj + 1e-9) return std::nullopt;
        e = std::clamp(e, 0.0, inst.capacity_kj);
        sol.times_s.push_back(t);
        sol.energies_kj.push_back(e);
    }
    sol.objective_s = t;
    return sol;
}

namespace {

struct Searcher {
    const AoInstance& inst;
    std::chrono::steady_clock::time_point deadline;
    std::vector<int> visits;         // visit node ids
    std::vector<double> min_in_phi;  // cheapest incoming transit per visit
    AoSolution best;
    bool have_best = false;
    int charge_budget = 8;

    bool timed_out() const { return std::chrono::steady_clock::now() >= deadline; }

    double lower_bound_remaining(int at, unsigned mask) const {
        double lb = 0.0;
        for (std::size_t vi = 0; vi < visits.size(); ++vi) {
            if (mask & (1u << vi)) continue;
            lb = std::max(lb, std::min(inst.phi_s(at, visits[vi]), min_in_phi[vi]));
        }
        return lb;
    }

    void consider(std::vector<int>& route) {
        auto sim = simulate_route(inst, route);
        if (!sim) return;
        if (!have_best || sim->objective_s < best.objective_s) {
            best = std::move(*sim);
            have_best = true;
        }
    }

    void dfs(std::vector<int>& route, int at, double t, double e, unsigned mask, int charges) {
        if (timed_out()) return;
        if (have_best && t + lower_bound_remaining(at, mask) >= best.objective_s) return;
        if (mask == (1u << visits.size()) - 1) {
            consider(route);
            return;
        }
        // Visit legs, nearest first.
        std::vector<std::pair<double, std::size_t>> order;
        for (std::size_t vi = 0; vi < visits.size(); ++vi)
            if (!(mask & (1u << vi))) order.emplace_back(inst.phi_s(at, visits[vi]), vi);
        std::sort(order.begin(), order.end());
        for (const auto& [phi, vi] : order) {
            const int j = visits[vi];
            const double psi = inst.psi_kj(at, j);
            if (e - psi < -1e-9) continue;
            route.push_back(j);
            dfs(route, j, t + phi, e - psi, mask | (1u << vi), charges);
            route.pop_back();
        }
        if (charges <= 0) return;
        // Depot recharge inserts.
        for (int j = 0; j < static_cast<int>(inst.nodes.size()); ++j) {
            const auto& n = inst.nodes[static_cast<std::size_t>(j)];
            if (n.kind != AoNode::Kind::Depot) continue;
            const double psi = inst.psi_kj(at, j);
            if (e - psi < -1e-9 || e - psi > inst.charge_cap_kj) continue;
            const double arrive = t + inst.phi_s(at, j);
            const double start = std::ceil(arrive / inst.gamma_d_s - 1e-9) * inst.gamma_d_s;
            route.push_back(j);
            dfs(route, j, start + inst.gamma_d_s, e - psi + inst.charge_step_kj, mask,
                charges - 1);
            route.pop_back();
        }
        // Rendezvous chains: enter a window and ride consecutive charge legs.
        for (int q = 0; q < static_cast<int>(inst.nodes.size()); ++q) {
            const auto& n = inst.nodes[static_cast<std::size_t>(q)];
            if (n.kind != AoNode::Kind::Rendezvous) continue;
            const double phi = inst.phi_s(at, q);
            if (t + phi > n.window_s + 1e-6) continue;
            const double psi = inst.psi_kj(at, q);
            if (e - psi < -1e-9) continue;
            std::vector<int> chain{q};
            int cur = q;
            while (true) {
                int next = -1;
                for (int r = 0; r < static_cast<int>(inst.nodes.size()); ++r)
                    if (r != cur && charge_leg(inst, cur, r)) {
                        next = r;
                        break;
                    }
                if (next < 0) break;
                chain.push_back(next);
                cur = next;
            }
            if (chain.size() < 2) continue;
            double ce = e - psi;
            double ct = n.window_s;
            for (std::size_t step = 1; step < chain.size(); ++step) {
                if (ce <= inst.charge_cap_kj + 1e-9) ce += inst.charge_step_kj;
                ct = inst.nodes[static_cast<std::size_t>(chain[step])].window_s;
                const std::size_t len = step + 1;
                for (std::size_t s = 0; s < len; ++s) route.push_back(chain[s]);
                dfs(route, chain[step], ct, ce, mask, charges - 1);
                for (std::size_t s = 0; s < len; ++s) route.pop_back();
            }
        }
    }
};

}  // namespace

AoSolution solve_ao(const AoInstance& inst, double incumbent_objective, double budget_s) {
    const auto anchor = simulate_route(inst, inst.anchor_route);
    if (!anchor)
        throw RecursiveFeasibilityViolation("anchor route infeasible in the agent-level system");

    Searcher s{inst,
               std::chrono::steady_clock::now() +
                   std::chrono::duration_cast<std::chrono::steady_clock::duration>(
                       std::chrono::duration<double>(budget_s)),
               inst.visit_nodes(),
               {},
               *anchor,
               true,
               8};
    if (s.visits.size() > 20) {
        // Too many sites for exhaustive refinement; keep the anchor timing.
        AoSolution out = *anchor;
        out.improved = out.objective_s <= incumbent_objective;
        return out;
    }
    s.min_in_phi.resize(s.visits.size(), std::numeric_limits<double>::infinity());
    for (std::size_t vi = 0; vi < s.visits.size(); ++vi)
        for (int i = 0; i < static_cast<int>(inst.nodes.size()); ++i)
            if (i != s.visits[vi])
                s.min_in_phi[vi] = std::min(s.min_in_phi[vi], inst.phi_s(i, s.visits[vi]));

    std::vector<int> route{0};
    unsigned mask = 0;
    // The start may already sit on owned sites.
    for (std::size_t vi = 0; vi < s.visits.size(); ++vi)
        if (geom::dist(inst.nodes[static_cast<std::size_t>(s.visits[vi])].pos_km,
                       inst.nodes[0].pos_km) <= 1e-9)
            mask |= 1u << vi;
    s.dfs(route, 0, inst.start_time_s, inst.energy0_kj, mask, s.charge_budget);

    AoSolution out = s.best;
    if (out.objective_s > incumbent_objective) {
        out = *anchor;  // anchor re-timing is never worse than the team plan
        if (out.objective_s > incumbent_objective) {
            out.improved = false;
            return out;
        }
    }
    out.improved = true;
    return out;
}

}  // namespace iterplan::ao
