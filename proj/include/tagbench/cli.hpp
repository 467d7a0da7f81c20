#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace tagbench::cli {

enum ExitCode : int { kOk = 0, kUsage = 1, kData = 2, kInternal = 3 };

/// Runs one subcommand (train, tag, sweep, analyze-unknowns, synth).
/// `args` excludes the program name.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);
int run(int argc, char** argv);

}  // namespace tagbench::cli
