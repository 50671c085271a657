#include "iterplan/csolve/smtlib.hpp"

#include <cctype>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <unistd.h>
#include <sstream>

namespace iterplan::csolve {

namespace {

std::string sanitize(const std::string& name) {
    std::string out;
    for (char ch : name) out += (std::isalnum(static_cast<unsigned char>(ch)) ? ch : '_');
    return out.empty() ? "v" : out;
}

std::string num(double x) {
    if (x == static_cast<long long>(x) && std::abs(x) < 1e15) {
        std::ostringstream os;
        if (x < 0) {
            os << "(- " << static_cast<long long>(-x) << ".0)";
        } else {
            os << static_cast<long long>(x) << ".0";
        }
        return os.str();
    }
    std::ostringstream os;
    os.precision(17);
    if (x < 0)
        os << "(- " << -x << ")";
    else
        os << x;
    return os.str();
}

std::string inum(long long x) {
    std::ostringstream os;
    if (x < 0)
        os << "(- " << -x << ")";
    else
        os << x;
    return os.str();
}

std::string var_ref(const Problem& p, VarId id) {
    return sanitize(p.var(id).name) + "_" + std::to_string(id);
}

void emit_constraint(const Problem& p, const Constraint& c, std::ostream& os) {
    using K = Constraint::Kind;
    switch (c.kind) {
        case K::True:
            os << "true";
            return;
        case K::False:
            os << "false";
            return;
        case K::BoolLit:
            if (c.negated) os << "(not " << var_ref(p, c.var) << ")";
            else os << var_ref(p, c.var);
            return;
        case K::EqConst:
            if (p.var(c.var).sort == SortKind::Bool)
                os << (c.value ? var_ref(p, c.var) : "(not " + var_ref(p, c.var) + ")");
            else
                os << "(= " << var_ref(p, c.var) << " " << inum(c.value) << ")";
            return;
        case K::Linear: {
            bool all_int = true;
            for (const auto& t : c.terms)
                if (p.var(t.var).sort == SortKind::Real) all_int = false;
            auto lit = [&](double v) { return all_int ? inum(static_cast<long long>(v)) : num(v); };
            std::ostringstream sum;
            if (c.terms.size() > 1) sum << "(+ ";
            for (std::size_t i = 0; i < c.terms.size(); ++i) {
                if (i) sum << " ";
                const auto& t = c.terms[i];
                if (t.coeff == 1.0)
                    sum << var_ref(p, t.var);
                else
                    sum << "(* " << lit(t.coeff) << " " << var_ref(p, t.var) << ")";
            }
            if (c.terms.size() > 1) sum << ")";
            const char* rel = c.rel == Rel::Eq ? "=" : (c.rel == Rel::Le ? "<=" : ">=");
            os << "(" << rel << " " << sum.str() << " " << lit(c.rhs) << ")";
            return;
        }
        case K::Not:
            os << "(not ";
            emit_constraint(p, *c.children[0], os);
            os << ")";
            return;
        case K::And:
        case K::Or: {
            os << (c.kind == K::And ? "(and" : "(or");
            for (const auto& ch : c.children) {
                os << " ";
                emit_constraint(p, *ch, os);
            }
            os << ")";
            return;
        }
        case K::Implies:
            os << "(=> ";
            emit_constraint(p, *c.children[0], os);
            os << " ";
            emit_constraint(p, *c.children[1], os);
            os << ")";
            return;
        case K::ExactlyOne: {
            // or(...) plus pairwise exclusion keeps it in core logic.
            os << "(and (or";
            for (const auto& ch : c.children) {
                os << " ";
                emit_constraint(p, *ch, os);
            }
            os << ")";
            for (std::size_t i = 0; i < c.children.size(); ++i)
                for (std::size_t j = i + 1; j < c.children.size(); ++j) {
                    os << " (not (and ";
                    emit_constraint(p, *c.children[i], os);
                    os << " ";
                    emit_constraint(p, *c.children[j], os);
                    os << "))";
                }
            os << ")";
            return;
        }
    }
}

}  // namespace

std::string emit_smtlib(const Problem& problem) {
    problem.check_sorts();
    std::ostringstream os;
    os << "(set-logic ALL)\n(set-option :produce-models true)\n";
    for (const auto& v : problem.vars()) {
        const std::string ref = var_ref(problem, v.id);
        switch (v.sort) {
            case SortKind::Bool:
                os << "(declare-const " << ref << " Bool)\n";
                break;
            case SortKind::Int:
                os << "(declare-const " << ref << " Int)\n";
                os << "(assert (and (>= " << ref << " " << inum(v.lo) << ") (<= " << ref << " "
                   << inum(v.hi) << ")))\n";
                break;
            case SortKind::Real:
                os << "(declare-const " << ref << " Real)\n";
                os << "(assert (and (>= " << ref << " " << num(v.rlo) << ") (<= " << ref << " "
                   << num(v.rhi) << ")))\n";
                break;
        }
    }
    for (const auto& c : problem.constraints()) {
        os << "(assert ";
        emit_constraint(problem, *c, os);
        os << ")\n";
    }
    os << "(check-sat)\n(get-model)\n";
    return os.str();
}

namespace {

// Minimal s-expression value reader for get-model entries.
double parse_numeric(const std::string& tok) {
    return std::strtod(tok.c_str(), nullptr);
}

}  // namespace

ExternalOutcome parse_solver_output(const Problem& problem, const std::string& text) {
    ExternalOutcome out;
    out.raw = text;
    std::istringstream is(text);
    std::string line;
    if (!std::getline(is, line)) return out;
    while (line.empty() && std::getline(is, line)) {
    }
    if (line.find("unsat") != std::string::npos) {
        out.status = ExternalOutcome::Status::Unsat;
        return out;
    }
    if (line.find("unknown") != std::string::npos) {
        out.status = ExternalOutcome::Status::Unknown;
        return out;
    }
    if (line.find("sat") == std::string::npos) return out;
    out.status = ExternalOutcome::Status::Sat;

    // Map emitted names back to ids.
    std::map<std::string, VarId> by_name;
    for (const auto& v : problem.vars()) by_name[var_ref(problem, v.id)] = v.id;

    std::string rest((std::istreambuf_iterator<char>(is)), std::istreambuf_iterator<char>());
    std::size_t pos = 0;
    while ((pos = rest.find("define-fun", pos)) != std::string::npos) {
        pos += 10;
        std::istringstream entry(rest.substr(pos, 400));
        std::string name;
        entry >> name;
        std::string tail;
        std::getline(entry, tail);
        auto it = by_name.find(name);
        if (it == by_name.end()) continue;
        const Var& v = problem.var(it->second);
        // tail looks like: " () Sort value)" possibly with (- n) or (/ p q).
        std::string cleaned;
        for (char ch : tail)
            cleaned += (ch == '(' || ch == ')') ? ' ' : ch;
        std::istringstream vals(cleaned);
        std::string tok;
        std::vector<std::string> toks;
        while (vals >> tok) toks.push_back(tok);
        // Skip the sort token(s); the value is what follows.
        std::size_t vi = 0;
        while (vi < toks.size() && (toks[vi] == "Bool" || toks[vi] == "Int" || toks[vi] == "Real"))
            ++vi;
        if (vi >= toks.size()) continue;
        if (v.sort == SortKind::Bool) {
            out.model[v.id] = toks[vi] == "true";
        } else if (v.sort == SortKind::Int) {
            long long val;
            if (toks[vi] == "-" && vi + 1 < toks.size())
                val = -std::strtoll(toks[vi + 1].c_str(), nullptr, 10);
            else
                val = std::strtoll(toks[vi].c_str(), nullptr, 10);
            out.model[v.id] = val;
        } else {
            double val;
            if (toks[vi] == "/" && vi + 2 < toks.size())
                val = parse_numeric(toks[vi + 1]) / parse_numeric(toks[vi + 2]);
            else if (toks[vi] == "-" && vi + 1 < toks.size()) {
                if (toks[vi + 1] == "/" && vi + 3 < toks.size())
                    val = -parse_numeric(toks[vi + 2]) / parse_numeric(toks[vi + 3]);
                else
                    val = -parse_numeric(toks[vi + 1]);
            } else
                val = parse_numeric(toks[vi]);
            out.model[v.id] = val;
        }
    }
    return out;
}

ExternalOutcome run_external_solver(const std::string& solver_cmd, const Problem& problem) {
    ExternalOutcome out;
    const std::string path = "/tmp/iterplan_smt_" + std::to_string(::getpid()) + ".smt2";
    {
        std::ofstream f(path);
        f << emit_smtlib(problem);
    }
    const std::string cmd = solver_cmd + " " + path + " 2>/dev/null";
    FILE* pipe = ::popen(cmd.c_str(), "r");
    if (!pipe) return out;
    std::string text;
    char buf[4096];
    while (std::size_t n = std::fread(buf, 1, sizeof buf, pipe)) text.append(buf, n);
    ::pclose(pipe);
    std::remove(path.c_str());
    return parse_solver_output(problem, text);
}

std::string configured_external_solver() {
    const char* env = std::getenv("ITERPLAN_SMT_SOLVER");
    return env ? env : "";
}

}  // namespace iterplan::csolve
