#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "itervote/core.hpp"

namespace itervote::cli {

// Process exit codes.
enum ExitCode : int {
  kOk = 0,
  kValidation = 1,
  kBudgetOrInfeasible = 2,
  kIo = 3,
};

// Environment variable overriding the exploration state budget.
inline constexpr const char* kBudgetEnv = "ITERVOTE_STATE_BUDGET";

// Runs the command line `args` (without the program name).
int run(const std::vector<std::string>& args, std::ostream& out,
        std::ostream& err);

// "borda", "plurality" or a comma-separated list of m numbers.
UtilityVector parse_utility(const std::string& text, int m);

// Comma-separated items, each either N or start:stop:step (stop included
// when it lies on the step grid).
std::vector<int> parse_n_range(const std::string& text);

}  // namespace itervote::cli
