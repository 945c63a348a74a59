#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace dmdgp::cli {

// Exit statuses shared by every command.
inline constexpr int kOk = 0;
inline constexpr int kInfeasible = 2;
inline constexpr int kInvalid = 3;
inline constexpr int kBudget = 4;
inline constexpr int kDegenerate = 5;
inline constexpr int kFailed = 6;

// Runs one command line (without the program name). Machine output goes to
// the files named by the options; the human summary goes to `log`.
int run(const std::vector<std::string>& args, std::ostream& log);

}  // namespace dmdgp::cli
