#pragma once

#include <string>
#include <vector>

namespace bakerlab {

struct CriterionResult {
  int id = 0;
  std::string name;
  bool pass = false;
  std::string detail;
  double seconds = 0;
};

// The pinned acceptance suite; also reachable through the C API and the CLI
// selftest subcommand.
std::vector<CriterionResult> run_acceptance(int threads = 0);

std::string format_acceptance(const std::vector<CriterionResult>& results);

}  // namespace bakerlab
