#pragma once

#include <string>

#include "iterplan/csolve/problem.hpp"

namespace iterplan::csolve {

// SMT-LIB2 v2.6 text: one declare-const per variable with range assertions,
// one assert per constraint, then check-sat and get-model.
std::string emit_smtlib(const Problem& problem);

struct ExternalOutcome {
    enum class Status : std::uint8_t { Sat, Unsat, Unknown, Error };
    Status status = Status::Error;
    Model model;
    std::string raw;
};

// Parses "(sat|unsat|unknown)" plus an optional get-model block of
// (define-fun name () Sort value) entries.
ExternalOutcome parse_solver_output(const Problem& problem, const std::string& text);

// Feeds the emitted problem to an external solver executable (reads the file
// path as argv[1]). Returns Error status when the subprocess cannot run.
ExternalOutcome run_external_solver(const std::string& solver_cmd, const Problem& problem);

// Path of the configured external solver, from ITERPLAN_SMT_SOLVER.
std::string configured_external_solver();

}  // namespace iterplan::csolve
