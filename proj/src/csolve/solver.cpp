#include "iterplan/csolve/solver.hpp"

#include <algorithm>
#include <cmath>
#include <deque>

#include "iterplan/csolve/verify.hpp"

namespace iterplan::csolve {

namespace {

constexpr double kEps = 1e-9;

enum class Tri : std::uint8_t { False, True, Unknown };

Tri tri_not(Tri t) {
    if (t == Tri::Unknown) return t;
    return t == Tri::True ? Tri::False : Tri::True;
}

// Bitset domain over [lo, lo + width) for Bool/Int vars.
struct IntDomain {
    long long lo = 0;
    int width = 0;
    std::vector<std::uint64_t> bits;

    void init(long long lo_, long long hi_) {
        lo = lo_;
        width = static_cast<int>(hi_ - lo_ + 1);
        bits.assign(static_cast<std::size_t>((width + 63) / 64), ~0ULL);
        const int tail = width % 64;
        if (tail) bits.back() = (1ULL << tail) - 1;
    }
    bool contains(long long v) const {
        if (v < lo || v >= lo + width) return false;
        const int k = static_cast<int>(v - lo);
        return (bits[static_cast<std::size_t>(k >> 6)] >> (k & 63)) & 1ULL;
    }
    bool remove(long long v) {  // true when something changed
        if (!contains(v)) return false;
        const int k = static_cast<int>(v - lo);
        bits[static_cast<std::size_t>(k >> 6)] &= ~(1ULL << (k & 63));
        return true;
    }
    int count() const {
        int c = 0;
        for (auto b : bits) c += __builtin_popcountll(b);
        return c;
    }
    bool empty() const {
        for (auto b : bits)
            if (b) return false;
        return true;
    }
    long long min_value() const {
        for (std::size_t w = 0; w < bits.size(); ++w)
            if (bits[w]) return lo + static_cast<long long>(w * 64 + __builtin_ctzll(bits[w]));
        return lo;
    }
    long long max_value() const {
        for (std::size_t w = bits.size(); w-- > 0;)
            if (bits[w]) return lo + static_cast<long long>(w * 64 + 63 - __builtin_clzll(bits[w]));
        return lo;
    }
    bool fixed() const { return count() == 1; }

    // Restrict to [a, b]; true when changed, sets conflict when emptied.
    bool clamp(long long a, long long b, bool& changed) {
        bool any = false;
        for (long long v = lo; v < lo + width; ++v) {
            if (v >= a && v <= b) continue;
            if (remove(v)) any = true;
        }
        changed = changed || any;
        return any;
    }
    std::vector<long long> values() const {
        std::vector<long long> out;
        for (long long v = lo; v < lo + width; ++v)
            if (contains(v)) out.push_back(v);
        return out;
    }
};

struct RealDomain {
    double lo = 0.0;
    double hi = 0.0;
};

// Residual constraint over reals after the finite skeleton is fixed.
struct ResAtom {
    std::vector<LinearTerm> terms;  // real vars only
    Rel rel = Rel::Eq;
    double rhs = 0.0;
    bool negated = false;  // strict complement
};

struct ResidualNode {
    // Either one atom, or a connective over children.
    enum class Kind : std::uint8_t { Atom, And, Or } kind = Kind::Atom;
    ResAtom atom;
    std::vector<ResidualNode> children;
};

class Solver : public AssignmentView {
public:
    Solver(const Problem& p, const SolverOptions& opts) : p_(p), opts_(opts) {
        deadline_ = std::chrono::steady_clock::now() +
                    std::chrono::duration_cast<std::chrono::steady_clock::duration>(
                        std::chrono::duration<double>(opts.budget_s));
        const auto& vars = p.vars();
        ints_.resize(vars.size());
        reals_.resize(vars.size());
        for (const auto& v : vars) {
            if (v.sort == SortKind::Real)
                reals_[static_cast<std::size_t>(v.id)] = {v.rlo, v.rhi};
            else
                ints_[static_cast<std::size_t>(v.id)].init(v.lo, v.hi);
        }
        // Watch lists: top-level constraint indices per variable.
        watches_.resize(vars.size());
        for (std::size_t ci = 0; ci < p.constraints().size(); ++ci)
            index_constraint(*p.constraints()[ci], static_cast<int>(ci));
        for (auto& w : watches_) {
            std::sort(w.begin(), w.end());
            w.erase(std::unique(w.begin(), w.end()), w.end());
        }
        // Branch order: finite vars by (time_rank, id).
        for (const auto& v : vars)
            if (v.sort != SortKind::Real) branch_order_.push_back(v.id);
        std::sort(branch_order_.begin(), branch_order_.end(), [&](VarId a, VarId b) {
            const auto& va = p.var(a);
            const auto& vb = p.var(b);
            if (va.time_rank != vb.time_rank) return va.time_rank < vb.time_rank;
            return a < b;
        });
    }

    std::optional<long long> value_of(VarId id) const override {
        const auto& v = p_.var(id);
        if (v.sort == SortKind::Real) return std::nullopt;
        const auto& d = ints_[static_cast<std::size_t>(id)];
        if (!d.fixed()) return std::nullopt;
        return d.min_value();
    }

    SolveResult run() {
        SolveResult res;
        const auto t0 = std::chrono::steady_clock::now();
        // Initial propagation of every constraint.
        std::deque<int> queue;
        for (int ci = 0; ci < static_cast<int>(p_.constraints().size()); ++ci) queue.push_back(ci);
        if (!propagate(queue)) {
            res.status = SolveResult::Status::Unsat;
        } else {
            switch (search(0)) {
                case SearchOutcome::Sat:
                    res.status = SolveResult::Status::Sat;
                    res.model = std::move(model_);
                    break;
                case SearchOutcome::Exhausted:
                    res.status = inconclusive_ ? SolveResult::Status::Unknown
                                               : SolveResult::Status::Unsat;
                    break;
                case SearchOutcome::Timeout:
                    res.status = SolveResult::Status::Unknown;
                    res.timeout = true;
                    break;
            }
        }
        res.stats = stats_;
        res.stats.elapsed_s =
            std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        return res;
    }

private:
    enum class SearchOutcome : std::uint8_t { Sat, Exhausted, Timeout };

    void index_constraint(const Constraint& c, int ci) {
        using K = Constraint::Kind;
        switch (c.kind) {
            case K::BoolLit:
            case K::EqConst:
                watches_[static_cast<std::size_t>(c.var)].push_back(ci);
                break;
            case K::Linear:
                for (const auto& t : c.terms)
                    watches_[static_cast<std::size_t>(t.var)].push_back(ci);
                break;
            case K::Not:
            case K::And:
            case K::Or:
            case K::Implies:
            case K::ExactlyOne:
                for (const auto& ch : c.children) index_constraint(*ch, ci);
                break;
            default:
                break;
        }
    }

    bool out_of_time() {
        if (++clock_probe_ % 512 == 0)
            timed_out_ = timed_out_ || std::chrono::steady_clock::now() >= deadline_;
        return timed_out_;
    }

    // ---- three-valued evaluation ----------------------------------------

    void term_bounds(const LinearTerm& t, double& lo, double& hi) const {
        const auto& v = p_.var(t.var);
        double a, b;
        if (v.sort == SortKind::Real) {
            a = reals_[static_cast<std::size_t>(t.var)].lo;
            b = reals_[static_cast<std::size_t>(t.var)].hi;
        } else {
            a = static_cast<double>(ints_[static_cast<std::size_t>(t.var)].min_value());
            b = static_cast<double>(ints_[static_cast<std::size_t>(t.var)].max_value());
        }
        if (t.coeff >= 0) {
            lo = t.coeff * a;
            hi = t.coeff * b;
        } else {
            lo = t.coeff * b;
            hi = t.coeff * a;
        }
    }

    Tri eval_linear(const Constraint& c) const {
        double slo = 0, shi = 0;
        for (const auto& t : c.terms) {
            double lo, hi;
            term_bounds(t, lo, hi);
            slo += lo;
            shi += hi;
        }
        switch (c.rel) {
            case Rel::Le:
                if (shi <= c.rhs + kEps) return Tri::True;
                if (slo > c.rhs + kEps) return Tri::False;
                return Tri::Unknown;
            case Rel::Ge:
                if (slo >= c.rhs - kEps) return Tri::True;
                if (shi < c.rhs - kEps) return Tri::False;
                return Tri::Unknown;
            case Rel::Eq:
                if (slo > c.rhs + kEps || shi < c.rhs - kEps) return Tri::False;
                if (std::abs(slo - c.rhs) <= kEps && std::abs(shi - c.rhs) <= kEps)
                    return Tri::True;
                return Tri::Unknown;
        }
        return Tri::Unknown;
    }

    Tri eval(const Constraint& c) const {
        using K = Constraint::Kind;
        switch (c.kind) {
            case K::True:
                return Tri::True;
            case K::False:
                return Tri::False;
            case K::BoolLit: {
                const auto& d = ints_[static_cast<std::size_t>(c.var)];
                if (!d.fixed()) return Tri::Unknown;
                const bool val = d.min_value() != 0;
                return (val != c.negated) ? Tri::True : Tri::False;
            }
            case K::EqConst: {
                const auto& d = ints_[static_cast<std::size_t>(c.var)];
                if (!d.contains(c.value)) return Tri::False;
                return d.fixed() ? Tri::True : Tri::Unknown;
            }
            case K::Linear:
                return eval_linear(c);
            case K::Not:
                return tri_not(eval(*c.children[0]));
            case K::And: {
                bool unknown = false;
                for (const auto& ch : c.children) {
                    const Tri t = eval(*ch);
                    if (t == Tri::False) return Tri::False;
                    if (t == Tri::Unknown) unknown = true;
                }
                return unknown ? Tri::Unknown : Tri::True;
            }
            case K::Or: {
                bool unknown = false;
                for (const auto& ch : c.children) {
                    const Tri t = eval(*ch);
                    if (t == Tri::True) return Tri::True;
                    if (t == Tri::Unknown) unknown = true;
                }
                return unknown ? Tri::Unknown : Tri::False;
            }
            case K::Implies: {
                const Tri a = eval(*c.children[0]);
                if (a == Tri::False) return Tri::True;
                const Tri b = eval(*c.children[1]);
                if (b == Tri::True) return Tri::True;
                if (a == Tri::True && b == Tri::False) return Tri::False;
                return Tri::Unknown;
            }
            case K::ExactlyOne: {
                int t = 0, u = 0;
                for (const auto& ch : c.children) {
                    const Tri e = eval(*ch);
                    if (e == Tri::True) ++t;
                    else if (e == Tri::Unknown) ++u;
                }
                if (t > 1) return Tri::False;
                if (t == 1) return u == 0 ? Tri::True : Tri::Unknown;
                if (u == 0) return Tri::False;
                return Tri::Unknown;
            }
        }
        return Tri::Unknown;
    }

    // ---- propagation ------------------------------------------------------

    void touch(VarId v) { touched_.push_back(v); }

    bool fix_int(VarId v, long long val) {
        auto& d = ints_[static_cast<std::size_t>(v)];
        if (!d.contains(val)) return false;
        bool changed = false;
        for (long long x = d.min_value(); x <= d.max_value(); ++x)
            if (x != val && d.remove(x)) changed = true;
        if (changed) touch(v);
        return true;
    }

    bool remove_int(VarId v, long long val) {
        auto& d = ints_[static_cast<std::size_t>(v)];
        if (d.remove(val)) {
            if (d.empty()) return false;
            touch(v);
        }
        return true;
    }

    bool clamp_int(VarId v, long long a, long long b) {
        auto& d = ints_[static_cast<std::size_t>(v)];
        bool changed = false;
        d.clamp(a, b, changed);
        if (d.empty()) return false;
        if (changed) touch(v);
        return true;
    }

    bool clamp_real(VarId v, double lo, double hi) {
        auto& d = reals_[static_cast<std::size_t>(v)];
        bool changed = false;
        if (lo > d.lo + kEps) {
            d.lo = lo;
            changed = true;
        }
        if (hi < d.hi - kEps) {
            d.hi = hi;
            changed = true;
        }
        if (d.lo > d.hi + kEps) return false;
        if (changed) touch(v);
        return true;
    }

    bool tighten_linear(const Constraint& c, bool enforce_le, bool enforce_ge) {
        // sum of per-term bounds
        double slo = 0, shi = 0;
        std::vector<std::pair<double, double>> tb(c.terms.size());
        for (std::size_t i = 0; i < c.terms.size(); ++i) {
            term_bounds(c.terms[i], tb[i].first, tb[i].second);
            slo += tb[i].first;
            shi += tb[i].second;
        }
        if (enforce_le && slo > c.rhs + kEps) return false;
        if (enforce_ge && shi < c.rhs - kEps) return false;
        for (std::size_t i = 0; i < c.terms.size(); ++i) {
            const auto& t = c.terms[i];
            const auto& v = p_.var(t.var);
            if (std::abs(t.coeff) < 1e-15) continue;
            double lo = -std::numeric_limits<double>::infinity();
            double hi = std::numeric_limits<double>::infinity();
            if (enforce_le) {
                // coeff*x <= rhs - (slo - tb[i].lo)
                const double bound = c.rhs - (slo - tb[i].first);
                if (t.coeff > 0) hi = std::min(hi, bound / t.coeff);
                else lo = std::max(lo, bound / t.coeff);
            }
            if (enforce_ge) {
                const double bound = c.rhs - (shi - tb[i].second);
                if (t.coeff > 0) lo = std::max(lo, bound / t.coeff);
                else hi = std::min(hi, bound / t.coeff);
            }
            if (v.sort == SortKind::Real) {
                if (!clamp_real(t.var, lo, hi)) return false;
            } else {
                const long long a = std::isinf(lo) ? v.lo
                                                   : static_cast<long long>(std::ceil(lo - kEps));
                const long long b = std::isinf(hi) ? v.hi
                                                   : static_cast<long long>(std::floor(hi + kEps));
                if (!clamp_int(t.var, a, b)) return false;
            }
        }
        return true;
    }

    bool enforce(const Constraint& c, bool want) {
        using K = Constraint::Kind;
        switch (c.kind) {
            case K::True:
                return want;
            case K::False:
                return !want;
            case K::BoolLit:
                return fix_int(c.var, (want != c.negated) ? 1 : 0);
            case K::EqConst:
                return want ? fix_int(c.var, c.value) : remove_int(c.var, c.value);
            case K::Linear: {
                if (!want) {
                    // Complements of integer atoms tighten; otherwise evaluate only.
                    bool all_int = true;
                    bool int_coeffs = true;
                    for (const auto& t : c.terms) {
                        if (p_.var(t.var).sort == SortKind::Real) all_int = false;
                        if (std::abs(t.coeff - std::round(t.coeff)) > 1e-12) int_coeffs = false;
                    }
                    if (all_int && int_coeffs) {
                        switch (c.rel) {
                            case Rel::Le: {  // sum >= floor(rhs)+1
                                Constraint flip = c;
                                flip.rel = Rel::Ge;
                                flip.rhs = std::floor(c.rhs + kEps) + 1.0;
                                return tighten_linear(flip, false, true);
                            }
                            case Rel::Ge: {
                                Constraint flip = c;
                                flip.rel = Rel::Le;
                                flip.rhs = std::ceil(c.rhs - kEps) - 1.0;
                                return tighten_linear(flip, true, false);
                            }
                            case Rel::Eq:
                                return eval_linear(c) != Tri::True;
                        }
                    }
                    return eval(c) != Tri::True;
                }
                switch (c.rel) {
                    case Rel::Le:
                        return tighten_linear(c, true, false);
                    case Rel::Ge:
                        return tighten_linear(c, false, true);
                    case Rel::Eq:
                        return tighten_linear(c, true, true);
                }
                return true;
            }
            case K::Not:
                return enforce(*c.children[0], !want);
            case K::And: {
                if (want) {
                    for (const auto& ch : c.children)
                        if (!enforce(*ch, true)) return false;
                    return true;
                }
                // not-And == Or of negations
                int unknowns = 0;
                const Constraint* last = nullptr;
                for (const auto& ch : c.children) {
                    const Tri t = eval(*ch);
                    if (t == Tri::False) return true;  // already satisfied
                    if (t == Tri::Unknown) {
                        ++unknowns;
                        last = ch.get();
                    }
                }
                if (unknowns == 0) return false;  // all true
                if (unknowns == 1) return enforce(*last, false);
                return true;
            }
            case K::Or: {
                if (!want) {
                    for (const auto& ch : c.children)
                        if (!enforce(*ch, false)) return false;
                    return true;
                }
                int unknowns = 0;
                const Constraint* last = nullptr;
                for (const auto& ch : c.children) {
                    const Tri t = eval(*ch);
                    if (t == Tri::True) return true;
                    if (t == Tri::Unknown) {
                        ++unknowns;
                        last = ch.get();
                    }
                }
                if (unknowns == 0) return false;
                if (unknowns == 1) return enforce(*last, true);
                return true;
            }
            case K::Implies: {
                if (!want) return enforce(*c.children[0], true) && enforce(*c.children[1], false);
                const Tri a = eval(*c.children[0]);
                if (a == Tri::True) return enforce(*c.children[1], true);
                if (a == Tri::Unknown && eval(*c.children[1]) == Tri::False)
                    return enforce(*c.children[0], false);
                return true;
            }
            case K::ExactlyOne: {
                if (!want) return eval(c) != Tri::True;
                int trues = 0, unknowns = 0;
                for (const auto& ch : c.children) {
                    const Tri t = eval(*ch);
                    if (t == Tri::True) ++trues;
                    else if (t == Tri::Unknown) ++unknowns;
                }
                if (trues > 1) return false;
                if (trues == 1) {
                    for (const auto& ch : c.children)
                        if (eval(*ch) == Tri::Unknown && !enforce(*ch, false)) return false;
                    return true;
                }
                if (unknowns == 0) return false;
                if (unknowns == 1) {
                    for (const auto& ch : c.children)
                        if (eval(*ch) == Tri::Unknown) return enforce(*ch, true);
                }
                return true;
            }
        }
        return true;
    }

    bool propagate(std::deque<int>& queue) {
        std::vector<char> queued(p_.constraints().size(), 0);
        for (int ci : queue) queued[static_cast<std::size_t>(ci)] = 1;
        while (!queue.empty()) {
            if (out_of_time()) return true;  // stop propagating; caller checks timeout
            const int ci = queue.front();
            queue.pop_front();
            queued[static_cast<std::size_t>(ci)] = 0;
            ++stats_.propagations;
            touched_.clear();
            if (!enforce(*p_.constraints()[static_cast<std::size_t>(ci)], true)) {
                ++stats_.conflicts;
                return false;
            }
            for (VarId v : touched_) {
                for (int wi : watches_[static_cast<std::size_t>(v)]) {
                    if (!queued[static_cast<std::size_t>(wi)]) {
                        queued[static_cast<std::size_t>(wi)] = 1;
                        queue.push_back(wi);
                    }
                }
            }
        }
        return true;
    }

    bool propagate_var(VarId v) {
        std::deque<int> queue(watches_[static_cast<std::size_t>(v)].begin(),
                              watches_[static_cast<std::size_t>(v)].end());
        return propagate(queue);
    }

    // ---- residual reals at a leaf ------------------------------------------

    std::optional<ResidualNode> reduce(const Constraint& c, bool& value_out, bool& is_value) {
        // Returns residual; when is_value, value_out carries a decided truth.
        using K = Constraint::Kind;
        const Tri t = eval(c);
        if (t != Tri::Unknown && c.kind != K::Linear) {
            is_value = true;
            value_out = t == Tri::True;
            return std::nullopt;
        }
        switch (c.kind) {
            case K::Linear: {
                // Substitute fixed finite vars; keep real terms.
                ResAtom atom;
                double rhs = c.rhs;
                bool has_real = false;
                for (const auto& term : c.terms) {
                    const auto& v = p_.var(term.var);
                    if (v.sort == SortKind::Real) {
                        atom.terms.push_back(term);
                        has_real = true;
                    } else {
                        rhs -= term.coeff *
                               static_cast<double>(ints_[static_cast<std::size_t>(term.var)]
                                                       .min_value());
                    }
                }
                if (!has_real) {
                    is_value = true;
                    double lhs = 0;
                    (void)lhs;
                    const Tri tv = eval_linear(c);
                    value_out = tv == Tri::True;
                    return std::nullopt;
                }
                atom.rhs = rhs;
                atom.rel = c.rel;
                is_value = false;
                ResidualNode node;
                node.kind = ResidualNode::Kind::Atom;
                node.atom = std::move(atom);
                return node;
            }
            case K::Not: {
                bool v = false, isv = false;
                auto sub = reduce(*c.children[0], v, isv);
                if (isv) {
                    is_value = true;
                    value_out = !v;
                    return std::nullopt;
                }
                is_value = false;
                return negate_residual(std::move(*sub));
            }
            case K::And:
            case K::Or: {
                const bool is_and = c.kind == K::And;
                ResidualNode node;
                node.kind = is_and ? ResidualNode::Kind::And : ResidualNode::Kind::Or;
                for (const auto& ch : c.children) {
                    bool v = false, isv = false;
                    auto sub = reduce(*ch, v, isv);
                    if (isv) {
                        if (is_and && !v) {
                            is_value = true;
                            value_out = false;
                            return std::nullopt;
                        }
                        if (!is_and && v) {
                            is_value = true;
                            value_out = true;
                            return std::nullopt;
                        }
                        continue;
                    }
                    node.children.push_back(std::move(*sub));
                }
                if (node.children.empty()) {
                    is_value = true;
                    value_out = is_and;
                    return std::nullopt;
                }
                if (node.children.size() == 1) {
                    is_value = false;
                    return node.children[0];
                }
                is_value = false;
                return node;
            }
            case K::Implies: {
                bool va = false, ia = false;
                auto ra = reduce(*c.children[0], va, ia);
                bool vb = false, ib = false;
                auto rb = reduce(*c.children[1], vb, ib);
                if (ia && !va) {
                    is_value = true;
                    value_out = true;
                    return std::nullopt;
                }
                if (ib && vb) {
                    is_value = true;
                    value_out = true;
                    return std::nullopt;
                }
                ResidualNode node;
                node.kind = ResidualNode::Kind::Or;
                if (!ia) node.children.push_back(negate_residual(std::move(*ra)));
                if (!ib) node.children.push_back(std::move(*rb));
                if (node.children.empty()) {
                    is_value = true;
                    value_out = (ia && !va) || (ib && vb);
                    return std::nullopt;
                }
                if (node.children.size() == 1) {
                    is_value = false;
                    return node.children[0];
                }
                is_value = false;
                return node;
            }
            default:
                // Finite constructs are fully decided at a leaf.
                is_value = true;
                value_out = t == Tri::True;
                return std::nullopt;
        }
    }

    static ResidualNode negate_residual(ResidualNode n) {
        switch (n.kind) {
            case ResidualNode::Kind::Atom:
                n.atom.negated = !n.atom.negated;
                return n;
            case ResidualNode::Kind::And:
            case ResidualNode::Kind::Or: {
                ResidualNode out;
                out.kind = n.kind == ResidualNode::Kind::And ? ResidualNode::Kind::Or
                                                             : ResidualNode::Kind::And;
                for (auto& ch : n.children) out.children.push_back(negate_residual(std::move(ch)));
                return out;
            }
        }
        return n;
    }

    // Narrow real intervals under a conjunction of atoms. Returns false on a
    // definite conflict (an interval emptied).
    bool narrow(const std::vector<ResAtom>& atoms, std::vector<RealDomain>& dom) {
        for (int round = 0; round < 64; ++round) {
            bool changed = false;
            for (const auto& a : atoms) {
                double slo = 0, shi = 0;
                std::vector<std::pair<double, double>> tb(a.terms.size());
                for (std::size_t i = 0; i < a.terms.size(); ++i) {
                    const auto& d = dom[static_cast<std::size_t>(a.terms[i].var)];
                    const double c = a.terms[i].coeff;
                    tb[i] = c >= 0 ? std::pair{c * d.lo, c * d.hi} : std::pair{c * d.hi, c * d.lo};
                    slo += tb[i].first;
                    shi += tb[i].second;
                }
                bool need_le = false, need_ge = false;
                double rhs_le = a.rhs, rhs_ge = a.rhs;
                if (!a.negated) {
                    need_le = a.rel == Rel::Le || a.rel == Rel::Eq;
                    need_ge = a.rel == Rel::Ge || a.rel == Rel::Eq;
                } else {
                    // complement with a hair of slack
                    if (a.rel == Rel::Le) {
                        need_ge = true;
                        rhs_ge = a.rhs + 1e-12;
                    } else if (a.rel == Rel::Ge) {
                        need_le = true;
                        rhs_le = a.rhs - 1e-12;
                    } else {
                        continue;  // != handled after assignment
                    }
                }
                if (need_le && slo > rhs_le + kEps) return false;
                if (need_ge && shi < rhs_ge - kEps) return false;
                for (std::size_t i = 0; i < a.terms.size(); ++i) {
                    const double c = a.terms[i].coeff;
                    if (std::abs(c) < 1e-15) continue;
                    auto& d = dom[static_cast<std::size_t>(a.terms[i].var)];
                    if (need_le) {
                        const double bound = (rhs_le - (slo - tb[i].first)) / c;
                        if (c > 0 && bound < d.hi - kEps) {
                            d.hi = bound;
                            changed = true;
                        }
                        if (c < 0 && bound > d.lo + kEps) {
                            d.lo = bound;
                            changed = true;
                        }
                    }
                    if (need_ge) {
                        const double bound = (rhs_ge - (shi - tb[i].second)) / c;
                        if (c > 0 && bound > d.lo + kEps) {
                            d.lo = bound;
                            changed = true;
                        }
                        if (c < 0 && bound < d.hi - kEps) {
                            d.hi = bound;
                            changed = true;
                        }
                    }
                    if (d.lo > d.hi + kEps) return false;
                }
            }
            if (!changed) return true;
        }
        return true;
    }

    // DFS over Or-branches in residual formulas, then narrowing + greedy fix.
    bool solve_residual(std::vector<ResidualNode> residuals, std::vector<ResAtom> atoms,
                        std::vector<RealDomain>& dom_out, bool& inconclusive) {
        // Peel connectives.
        while (!residuals.empty()) {
            ResidualNode n = std::move(residuals.back());
            residuals.pop_back();
            if (n.kind == ResidualNode::Kind::Atom) {
                atoms.push_back(std::move(n.atom));
            } else if (n.kind == ResidualNode::Kind::And) {
                for (auto& ch : n.children) residuals.push_back(std::move(ch));
            } else {
                for (auto& branch : n.children) {
                    auto res2 = residuals;
                    res2.push_back(std::move(branch));
                    std::vector<RealDomain> dom = dom_out;
                    bool inc2 = false;
                    auto atoms_copy = atoms;
                    if (solve_residual(std::move(res2), std::move(atoms_copy), dom, inc2)) {
                        dom_out = dom;
                        return true;
                    }
                    inconclusive = inconclusive || inc2;
                }
                return false;
            }
        }
        // Conjunction of atoms: narrow, then fix vars lowest-first in id order.
        std::vector<RealDomain> dom = dom_out;
        if (!narrow(atoms, dom)) return false;
        std::vector<VarId> real_vars;
        for (const auto& a : atoms)
            for (const auto& t : a.terms) real_vars.push_back(t.var);
        std::sort(real_vars.begin(), real_vars.end());
        real_vars.erase(std::unique(real_vars.begin(), real_vars.end()), real_vars.end());
        for (VarId v : real_vars) {
            auto& d = dom[static_cast<std::size_t>(v)];
            d.hi = d.lo;  // greedy: earliest/lowest value
            if (!narrow(atoms, dom)) {
                inconclusive = true;  // greedy imprecision, not a proof of absence
                return false;
            }
        }
        // Strict != atoms checked on the point assignment.
        for (const auto& a : atoms) {
            if (!(a.negated && a.rel == Rel::Eq)) continue;
            double sum = 0;
            for (const auto& t : a.terms) sum += t.coeff * dom[static_cast<std::size_t>(t.var)].lo;
            if (std::abs(sum - a.rhs) <= kEps) {
                inconclusive = true;
                return false;
            }
        }
        dom_out = dom;
        return true;
    }

    bool finalize_leaf() {
        std::vector<ResidualNode> residuals;
        for (const auto& c : p_.constraints()) {
            bool val = false, isv = false;
            auto r = reduce(*c, val, isv);
            if (isv) {
                if (!val) return false;
            } else {
                residuals.push_back(std::move(*r));
            }
        }
        std::vector<RealDomain> dom = reals_;
        bool inconclusive = false;
        if (!solve_residual(std::move(residuals), {}, dom, inconclusive)) {
            if (inconclusive) inconclusive_ = true;
            return false;
        }
        // Assemble and verify the model.
        Model m;
        for (const auto& v : p_.vars()) {
            if (v.sort == SortKind::Bool)
                m[v.id] = ints_[static_cast<std::size_t>(v.id)].min_value() != 0;
            else if (v.sort == SortKind::Int)
                m[v.id] = ints_[static_cast<std::size_t>(v.id)].min_value();
            else
                m[v.id] = dom[static_cast<std::size_t>(v.id)].lo;
        }
        if (!verify_model(p_, m)) {
            inconclusive_ = true;
            return false;
        }
        model_ = std::move(m);
        return true;
    }

    SearchOutcome search(std::size_t order_pos) {
        if (timed_out_ || out_of_time()) return SearchOutcome::Timeout;
        // Next unfixed finite var in branch order.
        while (order_pos < branch_order_.size() &&
               ints_[static_cast<std::size_t>(branch_order_[order_pos])].fixed())
            ++order_pos;
        if (order_pos == branch_order_.size())
            return finalize_leaf() ? SearchOutcome::Sat : SearchOutcome::Exhausted;

        const VarId v = branch_order_[order_pos];
        std::vector<long long> values = ints_[static_cast<std::size_t>(v)].values();
        if (opts_.value_heuristic) opts_.value_heuristic(p_.var(v), *this, values);

        for (long long val : values) {
            if (timed_out_ || out_of_time()) return SearchOutcome::Timeout;
            ++stats_.decisions;
            auto saved_ints = ints_;
            auto saved_reals = reals_;
            bool ok = fix_int(v, val);
            if (ok) ok = propagate_var(v);
            if (ok) {
                const SearchOutcome sub = search(order_pos + 1);
                if (sub != SearchOutcome::Exhausted) return sub;
            } else {
                ++stats_.conflicts;
            }
            ints_ = std::move(saved_ints);
            reals_ = std::move(saved_reals);
        }
        return SearchOutcome::Exhausted;
    }

    const Problem& p_;
    const SolverOptions& opts_;
    std::chrono::steady_clock::time_point deadline_;
    std::vector<IntDomain> ints_;
    std::vector<RealDomain> reals_;
    std::vector<std::vector<int>> watches_;
    std::vector<VarId> branch_order_;
    std::vector<VarId> touched_;
    Model model_;
    SolveStats stats_;
    bool inconclusive_ = false;
    bool timed_out_ = false;
    std::uint64_t clock_probe_ = 0;
};

}  // namespace

SolveResult check_sat(const Problem& problem, const SolverOptions& opts) {
    problem.check_sorts();
    Solver solver(problem, opts);
    return solver.run();
}

}  // namespace iterplan::csolve
