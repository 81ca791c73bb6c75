#pragma once

#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

namespace bakerlab {

struct RunResult {
  nlohmann::json report;  // config echo + results + thresholds (+ isolated timing)
  std::vector<std::pair<std::string, std::string>> csv_files;  // name, content
};

// Runs one experiment described by a JSON config. Throws ConfigError for
// schema problems, ComputeError for failures inside the computation.
RunResult run_experiment(const nlohmann::json& config, int threads = 0);

extern const char* kVersion;

}  // namespace bakerlab
