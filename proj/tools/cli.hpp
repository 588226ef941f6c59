#pragma once

#include <map>
#include <ostream>
#include <string>
#include <vector>

namespace sidon::cli {

enum ExitCode : int {
    kPass = 0,
    kInternal = 1,
    kHypothesis = 2,
    kCollapse = 3,
    kBudget = 4,
    kNegative = 5,  // verification ran and the object is not Sidon / the claim fails
};

/// Runs one command. `args` excludes the program name. Reports go to `out`
/// unless --out is given; diagnostics and timings go to `err`.
int run(std::vector<std::string> args, std::ostream& out, std::ostream& err);

/// Reads a flat key=value file ('#' starts a comment).
std::map<std::string, std::string> read_config_file(const std::string& path);

}  // namespace sidon::cli
