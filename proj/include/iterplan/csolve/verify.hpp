#pragma once

#include "iterplan/csolve/problem.hpp"

namespace iterplan::csolve {

struct VerifyResult {
    bool ok = true;
    std::string violation;  // description of the first failed constraint

    explicit operator bool() const { return ok; }
};

// Exact re-evaluation of every constraint under a total model; linear sums use
// compensated long-double accumulation and a 1e-9 tolerance only at the final
// comparison. Throws EncodingError when the model misses a variable.
VerifyResult verify_model(const Problem& problem, const Model& model);

}  // namespace iterplan::csolve
