#pragma once

#include <string>
#include <vector>

namespace qepzne::cli {

// Exit codes: 0 success, 1 usage, 2 input/schema, 3 runtime error.
int run(const std::vector<std::string>& args);

// Accepts plain decimals plus pi forms: "pi", "-pi", "2pi", "pi/4", "0.5pi".
double parse_angle_literal(const std::string& text);

}  // namespace qepzne::cli
