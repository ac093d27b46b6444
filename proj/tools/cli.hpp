#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace twinlim::cli {

enum Exit : int { ok = 0, axiom_failure = 1, parse_error = 2, refinement_cap = 3, usage_error = 4 };

/// Runs one command line. args excludes the program name.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace twinlim::cli
