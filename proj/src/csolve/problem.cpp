#include "iterplan/csolve/problem.hpp"

namespace iterplan::csolve {

namespace {
ConstraintPtr make(Constraint c) { return std::make_shared<const Constraint>(std::move(c)); }
}  // namespace

ConstraintPtr c_true() {
    Constraint c;
    c.kind = Constraint::Kind::True;
    return make(std::move(c));
}

ConstraintPtr c_false() {
    Constraint c;
    c.kind = Constraint::Kind::False;
    return make(std::move(c));
}

ConstraintPtr c_lit(VarId v, bool positive) {
    Constraint c;
    c.kind = Constraint::Kind::BoolLit;
    c.var = v;
    c.negated = !positive;
    return make(std::move(c));
}

ConstraintPtr c_eq(VarId v, long long value) {
    Constraint c;
    c.kind = Constraint::Kind::EqConst;
    c.var = v;
    c.value = value;
    return make(std::move(c));
}

ConstraintPtr c_neq(VarId v, long long value) { return c_not(c_eq(v, value)); }

ConstraintPtr c_linear(std::vector<LinearTerm> terms, Rel rel, double rhs) {
    Constraint c;
    c.kind = Constraint::Kind::Linear;
    c.terms = std::move(terms);
    c.rel = rel;
    c.rhs = rhs;
    return make(std::move(c));
}

ConstraintPtr c_not(ConstraintPtr inner) {
    Constraint c;
    c.kind = Constraint::Kind::Not;
    c.children.push_back(std::move(inner));
    return make(std::move(c));
}

ConstraintPtr c_and(std::vector<ConstraintPtr> cs) {
    if (cs.empty()) return c_true();
    if (cs.size() == 1) return cs.front();
    Constraint c;
    c.kind = Constraint::Kind::And;
    c.children = std::move(cs);
    return make(std::move(c));
}

ConstraintPtr c_or(std::vector<ConstraintPtr> cs) {
    if (cs.empty()) return c_false();
    if (cs.size() == 1) return cs.front();
    Constraint c;
    c.kind = Constraint::Kind::Or;
    c.children = std::move(cs);
    return make(std::move(c));
}

ConstraintPtr c_implies(ConstraintPtr a, ConstraintPtr b) {
    Constraint c;
    c.kind = Constraint::Kind::Implies;
    c.children.push_back(std::move(a));
    c.children.push_back(std::move(b));
    return make(std::move(c));
}

ConstraintPtr c_exactly_one(std::vector<ConstraintPtr> cs) {
    Constraint c;
    c.kind = Constraint::Kind::ExactlyOne;
    c.children = std::move(cs);
    return make(std::move(c));
}

VarId Problem::add_bool(std::string name, int time_rank) {
    Var v;
    v.id = static_cast<VarId>(vars_.size());
    v.sort = SortKind::Bool;
    v.lo = 0;
    v.hi = 1;
    v.name = std::move(name);
    v.time_rank = time_rank;
    vars_.push_back(std::move(v));
    return vars_.back().id;
}

VarId Problem::add_int(std::string name, long long lo, long long hi, int time_rank) {
    if (lo > hi) throw EncodingError("empty Int domain for " + name);
    Var v;
    v.id = static_cast<VarId>(vars_.size());
    v.sort = SortKind::Int;
    v.lo = lo;
    v.hi = hi;
    v.name = std::move(name);
    v.time_rank = time_rank;
    vars_.push_back(std::move(v));
    return vars_.back().id;
}

VarId Problem::add_real(std::string name, double lo, double hi, int time_rank) {
    if (!(lo <= hi)) throw EncodingError("empty Real domain for " + name);
    Var v;
    v.id = static_cast<VarId>(vars_.size());
    v.sort = SortKind::Real;
    v.rlo = lo;
    v.rhi = hi;
    v.name = std::move(name);
    v.time_rank = time_rank;
    vars_.push_back(std::move(v));
    return vars_.back().id;
}

void Problem::check_constraint(const Constraint& c, bool inside_exactly_one) const {
    using K = Constraint::Kind;
    auto check_var = [&](VarId v) {
        if (v < 0 || static_cast<std::size_t>(v) >= vars_.size())
            throw EncodingError("constraint references unknown variable");
    };
    switch (c.kind) {
        case K::True:
        case K::False:
            break;
        case K::BoolLit:
            check_var(c.var);
            if (var(c.var).sort != SortKind::Bool)
                throw EncodingError("boolean literal over non-Bool " + var(c.var).name);
            break;
        case K::EqConst:
            check_var(c.var);
            if (var(c.var).sort == SortKind::Real)
                throw EncodingError("EqConst over Real " + var(c.var).name);
            break;
        case K::Linear: {
            if (c.terms.empty()) throw EncodingError("empty linear atom");
            bool has_real = false;
            for (const auto& t : c.terms) {
                check_var(t.var);
                if (var(t.var).sort == SortKind::Bool)
                    throw EncodingError("Bool inside linear atom: " + var(t.var).name);
                if (var(t.var).sort == SortKind::Real) has_real = true;
            }
            if (has_real && inside_exactly_one)
                throw EncodingError("Real atom inside ExactlyOne");
            break;
        }
        case K::Not:
        case K::And:
        case K::Or:
        case K::Implies:
            for (const auto& ch : c.children) check_constraint(*ch, inside_exactly_one);
            break;
        case K::ExactlyOne:
            if (c.children.empty()) throw EncodingError("empty ExactlyOne");
            for (const auto& ch : c.children) check_constraint(*ch, true);
            break;
    }
}

void Problem::check_sorts() const {
    for (const auto& c : constraints_) check_constraint(*c, false);
}

}  // namespace iterplan::csolve
