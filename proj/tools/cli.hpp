#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace topocausal::cli {

// Exit codes of run().
inline constexpr int kOk = 0;
inline constexpr int kUsageError = 1;
inline constexpr int kDataError = 2;
inline constexpr int kAlgorithmError = 3;

// Runs one subcommand (infer, synth, curve, eval, bench). args excludes the
// program name. Data goes to files or `out`, diagnostics to `err`.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace topocausal::cli
