#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "config.hpp"

namespace qpc::cli {

struct RunOutcome {
  int exit_code = 0;
  std::vector<std::string> files;  // written paths
};

/// Executes the configured command. Library errors propagate to the caller.
RunOutcome run(const RunConfig& cfg, std::ostream& out);

/// "<experiment>-<timestamp>-<seed>" with a UTC timestamp.
std::string output_stem(const RunConfig& cfg);

}  // namespace qpc::cli
