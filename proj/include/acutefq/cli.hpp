#pragma once

#include <string>
#include <vector>

namespace acutefq::cli {

/// Runs the command line given by args (program name excluded).
/// Exit codes: 0 success, 1 verified property fails, 2 invalid input,
/// 3 search budget exhausted, 4 identity check failed.
int run(const std::vector<std::string>& args);

}  // namespace acutefq::cli
