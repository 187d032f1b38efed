#pragma once

#include <iosfwd>
#include <span>
#include <string>
#include <vector>

namespace classagg::cli {

enum ExitCode : int {
  kPass = 0,
  kFail = 1,
  kBudget = 2,
  kInvalidInput = 3,
};

/// Environment variable naming a directory with golden files for `demo`.
inline constexpr const char* kGoldenDirVariable = "CLASSAGG_GOLDEN_DIR";

/// Runs one command line (without the program name). Reports go to `out`,
/// diagnostics to `err`. Never throws.
int dispatch(std::span<const std::string> args, std::ostream& out, std::ostream& err);

/// The text printed by `demo table1`.
std::string render_table1_demo();

}  // namespace classagg::cli
