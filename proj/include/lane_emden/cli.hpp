#ifndef LANE_EMDEN_CLI_HPP
#define LANE_EMDEN_CLI_HPP

#include <iosfwd>

namespace lane_emden {

enum ExitCode : int {
  kExitOk = 0,
  kExitConfig = 1,
  kExitPartialBranch = 2,
  kExitVerificationFailed = 3,
  kExitCorruptData = 4,
};

/// Entry point of the lane_emden tool: solve, greens, verify, report.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace lane_emden

#endif  // LANE_EMDEN_CLI_HPP
