// Acceptance suite runner: one line per criterion, nonzero exit on failure.
#include <cstdio>
#include <cstring>

#include "bakerlab/acceptance.hpp"

int main(int argc, char** argv) {
  int threads = 0;
  for (int i = 1; i < argc; ++i) {
    if (std::strcmp(argv[i], "--threads") == 0 && i + 1 < argc) threads = std::atoi(argv[i + 1]);
  }
  auto results = bakerlab::run_acceptance(threads);
  std::fputs(bakerlab::format_acceptance(results).c_str(), stdout);
  int fails = 0;
  for (const auto& r : results)
    if (!r.pass) ++fails;
  return fails == 0 ? 0 : 1;
}
