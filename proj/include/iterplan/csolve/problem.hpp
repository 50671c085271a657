#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <variant>
#include <vector>

namespace iterplan::csolve {

using VarId = int;

enum class SortKind : std::uint8_t { Bool, Int, Real };

struct Var {
    VarId id = -1;
    SortKind sort = SortKind::Bool;
    long long lo = 0;  // Int bounds
    long long hi = 1;
    double rlo = 0.0;  // Real bounds
    double rhi = 0.0;
    std::string name;
    int time_rank = 0;  // branching order hint: smaller ranks decided first
};

enum class Rel : std::uint8_t { Eq, Le, Ge };

struct LinearTerm {
    double coeff = 0.0;
    VarId var = -1;
};

// Constraint tree. LinearAtom holds sum(coeff*var) rel rhs over Int/Real vars;
// EqConst pins a Bool/Int var; BoolLit is a (possibly negated) Bool var.
struct Constraint;
using ConstraintPtr = std::shared_ptr<const Constraint>;

struct Constraint {
    enum class Kind : std::uint8_t {
        True,
        False,
        BoolLit,
        EqConst,
        Linear,
        Not,
        And,
        Or,
        Implies,
        ExactlyOne,
    };
    Kind kind = Kind::True;
    VarId var = -1;         // BoolLit / EqConst
    bool negated = false;   // BoolLit
    long long value = 0;    // EqConst
    std::vector<LinearTerm> terms;  // Linear
    Rel rel = Rel::Eq;
    double rhs = 0.0;
    std::vector<ConstraintPtr> children;
};

ConstraintPtr c_true();
ConstraintPtr c_false();
ConstraintPtr c_lit(VarId v, bool positive = true);
ConstraintPtr c_eq(VarId v, long long value);
ConstraintPtr c_neq(VarId v, long long value);
ConstraintPtr c_linear(std::vector<LinearTerm> terms, Rel rel, double rhs);
ConstraintPtr c_not(ConstraintPtr c);
ConstraintPtr c_and(std::vector<ConstraintPtr> cs);
ConstraintPtr c_or(std::vector<ConstraintPtr> cs);
ConstraintPtr c_implies(ConstraintPtr a, ConstraintPtr b);
ConstraintPtr c_exactly_one(std::vector<ConstraintPtr> cs);

using Value = std::variant<bool, long long, double>;
using Model = std::map<VarId, Value>;

struct EncodingError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

class Problem {
public:
    VarId add_bool(std::string name, int time_rank = 0);
    VarId add_int(std::string name, long long lo, long long hi, int time_rank = 0);
    VarId add_real(std::string name, double lo, double hi, int time_rank = 0);
    void add(ConstraintPtr c) { constraints_.push_back(std::move(c)); }

    const std::vector<Var>& vars() const { return vars_; }
    const Var& var(VarId id) const { return vars_.at(static_cast<std::size_t>(id)); }
    const std::vector<ConstraintPtr>& constraints() const { return constraints_; }

    // Throws EncodingError on ill-sorted constructs (e.g. Bool inside a linear
    // atom, Real inside ExactlyOne, domains out of order).
    void check_sorts() const;

private:
    void check_constraint(const Constraint& c, bool inside_exactly_one) const;

    std::vector<Var> vars_;
    std::vector<ConstraintPtr> constraints_;
};

struct SolveStats {
    std::uint64_t decisions = 0;
    std::uint64_t propagations = 0;
    std::uint64_t conflicts = 0;
    double elapsed_s = 0.0;
};

struct SolveResult {
    enum class Status : std::uint8_t { Sat, Unsat, Unknown };
    Status status = Status::Unknown;
    bool timeout = false;  // meaningful for Unknown
    Model model;           // populated for Sat
    SolveStats stats;

    bool sat() const { return status == Status::Sat; }
    bool unsat() const { return status == Status::Unsat; }
};

}  // namespace iterplan::csolve
