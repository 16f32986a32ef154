#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "ssclab/serialize.hpp"

namespace ssclab::cli {

inline constexpr const char* kVersion = "0.1.0";

/// JSON text with every float at 17 significant digits; NaN and infinities become null.
std::string dump(const json& j, int indent = 2);

/// Runs one command line (without the program name). Result JSON goes to `out`,
/// logs and the run manifest to `err`. Exit codes: 0 ok, 2 validation, 1 internal.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace ssclab::cli
