#pragma once
// Small validation helpers shared across the library.

#include <string>

namespace mcnv {

// Throws std::invalid_argument; used to reject bad user-facing inputs.
void require_arg(bool cond, const std::string& msg);

// Throws std::runtime_error; used for internal consistency failures
// (solver breakdown, mismatched grids, corrupt files).
void require(bool cond, const std::string& msg);

}  // namespace mcnv
