#include "iterplan/csolve/verify.hpp"

#include <cmath>
#include <sstream>

namespace iterplan::csolve {

namespace {

constexpr double kTol = 1e-9;

double numeric_value(const Problem& p, const Model& m, VarId id) {
    auto it = m.find(id);
    if (it == m.end()) throw EncodingError("partial model: missing " + p.var(id).name);
    if (std::holds_alternative<long long>(it->second))
        return static_cast<double>(std::get<long long>(it->second));
    if (std::holds_alternative<double>(it->second)) return std::get<double>(it->second);
    throw EncodingError("boolean used numerically: " + p.var(id).name);
}

bool bool_value(const Problem& p, const Model& m, VarId id) {
    auto it = m.find(id);
    if (it == m.end()) throw EncodingError("partial model: missing " + p.var(id).name);
    if (std::holds_alternative<bool>(it->second)) return std::get<bool>(it->second);
    if (std::holds_alternative<long long>(it->second)) return std::get<long long>(it->second) != 0;
    throw EncodingError("real used as boolean: " + p.var(id).name);
}

long long int_value(const Problem& p, const Model& m, VarId id) {
    auto it = m.find(id);
    if (it == m.end()) throw EncodingError("partial model: missing " + p.var(id).name);
    if (std::holds_alternative<long long>(it->second)) return std::get<long long>(it->second);
    if (std::holds_alternative<bool>(it->second)) return std::get<bool>(it->second) ? 1 : 0;
    throw EncodingError("real used as integer: " + p.var(id).name);
}

bool eval(const Problem& p, const Model& m, const Constraint& c) {
    using K = Constraint::Kind;
    switch (c.kind) {
        case K::True:
            return true;
        case K::False:
            return false;
        case K::BoolLit:
            return bool_value(p, m, c.var) != c.negated;
        case K::EqConst:
            return int_value(p, m, c.var) == c.value;
        case K::Linear: {
            long double sum = 0.0L;
            long double comp = 0.0L;  // Kahan compensation
            for (const auto& t : c.terms) {
                const long double term =
                    static_cast<long double>(t.coeff) *
                    static_cast<long double>(numeric_value(p, m, t.var));
                const long double y = term - comp;
                const long double s = sum + y;
                comp = (s - sum) - y;
                sum = s;
            }
            const long double d = sum - static_cast<long double>(c.rhs);
            switch (c.rel) {
                case Rel::Eq:
                    return std::fabs(static_cast<double>(d)) <= kTol;
                case Rel::Le:
                    return static_cast<double>(d) <= kTol;
                case Rel::Ge:
                    return static_cast<double>(d) >= -kTol;
            }
            return false;
        }
        case K::Not:
            return !eval(p, m, *c.children[0]);
        case K::And:
            for (const auto& ch : c.children)
                if (!eval(p, m, *ch)) return false;
            return true;
        case K::Or:
            for (const auto& ch : c.children)
                if (eval(p, m, *ch)) return true;
            return false;
        case K::Implies:
            return !eval(p, m, *c.children[0]) || eval(p, m, *c.children[1]);
        case K::ExactlyOne: {
            int t = 0;
            for (const auto& ch : c.children)
                if (eval(p, m, *ch)) ++t;
            return t == 1;
        }
    }
    return false;
}

std::string render(const Problem& p, const Constraint& c) {
    using K = Constraint::Kind;
    std::ostringstream os;
    switch (c.kind) {
        case K::BoolLit:
            os << (c.negated ? "!" : "") << p.var(c.var).name;
            break;
        case K::EqConst:
            os << p.var(c.var).name << " = " << c.value;
            break;
        case K::Linear: {
            for (std::size_t i = 0; i < c.terms.size(); ++i) {
                if (i) os << " + ";
                os << c.terms[i].coeff << "*" << p.var(c.terms[i].var).name;
            }
            os << (c.rel == Rel::Eq ? " = " : c.rel == Rel::Le ? " <= " : " >= ") << c.rhs;
            break;
        }
        default:
            os << "composite constraint";
            break;
    }
    return os.str();
}

}  // namespace

VerifyResult verify_model(const Problem& problem, const Model& model) {
    // Domain membership first.
    for (const auto& v : problem.vars()) {
        auto it = model.find(v.id);
        if (it == model.end()) throw EncodingError("partial model: missing " + v.name);
        if (v.sort == SortKind::Int) {
            const long long x = int_value(problem, model, v.id);
            if (x < v.lo || x > v.hi) return {false, v.name + " outside its domain"};
        } else if (v.sort == SortKind::Real) {
            const double x = numeric_value(problem, model, v.id);
            if (x < v.rlo - kTol || x > v.rhi + kTol) return {false, v.name + " outside its domain"};
        }
    }
    for (const auto& c : problem.constraints())
        if (!eval(problem, model, *c)) return {false, render(problem, *c)};
    return {};
}

}  // namespace iterplan::csolve
