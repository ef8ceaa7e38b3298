#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace multihess::cli {

enum ExitCode { Ok = 0, ConfigError = 2, NumericFailure = 3, VerificationFailure = 4 };

// Runs one subcommand; JSON goes to `out`, messages to `err`.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace multihess::cli
