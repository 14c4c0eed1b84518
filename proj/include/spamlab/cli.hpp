#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace spamlab::cli {

enum ExitCode : int { kOk = 0, kUsage = 1, kDataError = 2, kInternal = 3 };

/// Runs one command. `args` excludes the program name. Reports go to `out`,
/// diagnostics to `err`; `in` supplies a message for `classify` without a corpus.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err, std::istream& in);

}  // namespace spamlab::cli
