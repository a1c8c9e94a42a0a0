#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <stdexcept>

#include "rieszlab/checks.hpp"
#include "rieszlab/energy.hpp"

using namespace rieszlab;

TEST_CASE("hand values check passes") {
  CheckResult r = check_hand_values();
  CHECK(r.pass);
  CHECK(r.name == "hand-values");
}

TEST_CASE("triple agreement check catches a corrupted evaluator") {
  // Clean run first.
  CheckResult good = check_energy_triple_agreement(10, 811);
  CHECK(good.pass);

  // A biased stand-in for the quadratic evaluator must trip the check.
  BaxterFn biased = [](const Configuration& cfg, const ModelParams& params) {
    return hamiltonian_baxter(cfg, params) + static_cast<double>(params.n) / 10.0;
  };
  CheckResult bad = check_energy_triple_agreement(10, 811, biased);
  CHECK_FALSE(bad.pass);
}

TEST_CASE("fast selftest is green") {
  auto results = run_selftest(false, 812);
  REQUIRE(results.size() == 3);
  for (const auto& r : results) {
    INFO(r.name, ": ", r.detail);
    CHECK(r.pass);
  }
}

TEST_CASE("criterion index is validated") {
  CHECK_THROWS_AS(run_acceptance_criterion(0, 1), std::invalid_argument);
  CHECK_THROWS_AS(run_acceptance_criterion(12, 1), std::invalid_argument);
}
