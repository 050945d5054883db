#pragma once

#include <iosfwd>

#include "billiards/report.hpp"

namespace billiards::cli {

/// Exit codes shared by every subcommand.
inline constexpr int kExitPass = 0;
inline constexpr int kExitCheckFailed = 1;
inline constexpr int kExitConstruction = 2;

/// Throws Error(InvalidArgument) unless a1 ≥ a2 > 0, samples ≥ 2 and tol > 0.
void validate(const RunConfig& config);

int cmd_caustic(const RunConfig& config, std::ostream& out, std::ostream& err);
int cmd_verify(const RunConfig& config, std::ostream& out, std::ostream& err);
int cmd_generic(const RunConfig& config, std::ostream& out, std::ostream& err);
int cmd_sweep(const RunConfig& config, std::ostream& out, std::ostream& err);

/// Dispatches on config.command.
int run(const RunConfig& config, std::ostream& out, std::ostream& err);

/// Builds the verify/sweep report without writing it. On construction failure
/// the report carries `error` and no quantities, and `exit_code` is 2.
InvariantReport build_family_report(const RunConfig& config, int& exit_code);

/// Parses "k:a:b".
Harmonic parse_harmonic(const std::string& text);

}  // namespace billiards::cli
