#pragma once

#include <ostream>
#include <span>
#include <string>

namespace keysim::cli {

enum ExitCode : int {
  kExitOk = 0,
  kExitUsage = 1,
  kExitInput = 2,       // unreadable or malformed input
  kExitValidation = 3,  // layout failed validation
};

// Entry point of the `keysim` tool. `args` excludes the program name.
// Subcommands: predict, compare, layout {show|validate|export}, analyze,
// calibrate.
int run(std::span<const std::string> args, std::ostream& out, std::ostream& err);

}  // namespace keysim::cli
