#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace gldpdq {

//! Exit statuses of the command-line tool.
inline constexpr int kExitOk = 0;
inline constexpr int kExitUsage = 2;
inline constexpr int kExitNumeric = 3;

//! Runs the command line `args` (without the program name). Reports go to
//! `out`, diagnostics to `err`.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

} // namespace gldpdq
