#pragma once

#include <iosfwd>

#include "iterplan/scenario.hpp"

namespace iterplan::bench {

// Line-oriented text format: `key value...` per line, `#` comments.
// Vectors are written `x,y`. See docs in the repository README.
Scenario parse_scenario(std::istream& in);
Scenario load_scenario(const std::string& path);
std::string format_scenario(const Scenario& scn);
void save_scenario(const Scenario& scn, const std::string& path);

}  // namespace iterplan::bench
