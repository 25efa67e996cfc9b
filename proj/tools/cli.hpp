#pragma once

#include <ostream>

namespace bwdm::cli {

enum ExitCode : int { ok = 0, usage_error = 2, data_error = 3 };

/// Entry point of the `bwdm` command line tool. Data goes to `out`,
/// diagnostics to `err`.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace bwdm::cli
