#pragma once

#include <iosfwd>
#include <span>
#include <string>

#include "defspec/quadrature_grid.hpp"

namespace defspec::cli {

// Exit codes.
inline constexpr int exit_success = 0;
inline constexpr int exit_verdict_fail = 1;
inline constexpr int exit_usage = 2;
inline constexpr int exit_numerical = 3;

/// Runs one command line. `args` excludes the program name. Results go to
/// `out` (or the --out file); usage text and diagnostics go to `err`.
int run(std::span<const std::string> args, std::ostream& out, std::ostream& err);

/// Target functions accepted by --target: C, const, const:<value>,
/// psi:<n>, sin3. ValidationError for anything else.
RealFunction parse_target(const std::string& spec, const OperatorParams& params);

}  // namespace defspec::cli
