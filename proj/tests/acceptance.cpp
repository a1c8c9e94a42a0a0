// Acceptance suite: one line per criterion, exit code counts failures.
// `--only k` restricts the run to a single criterion.
#include <cstdio>
#include <cstdlib>
#include <cstring>
#include <vector>

#include "rieszlab/checks.hpp"

int main(int argc, char** argv) {
  std::vector<int> indices;
  for (int a = 1; a < argc; ++a) {
    if (std::strcmp(argv[a], "--only") == 0 && a + 1 < argc) {
      indices.push_back(std::atoi(argv[++a]));
    } else {
      std::fprintf(stderr, "usage: %s [--only k]\n", argv[0]);
      return 64;
    }
  }
  if (indices.empty())
    for (int i = 1; i <= 11; ++i) indices.push_back(i);

  const std::uint64_t seed_base = 777;
  int failures = 0;
  for (int i : indices) {
    rieszlab::CheckResult r =
        rieszlab::run_acceptance_criterion(i, seed_base + static_cast<std::uint64_t>(i));
    std::printf("[%s] %02d %-26s (%.1fs) %s\n", r.pass ? "PASS" : "FAIL", i,
                r.name.c_str(), r.elapsed_s, r.detail.c_str());
    std::fflush(stdout);
    if (!r.pass) ++failures;
  }
  return failures;
}
