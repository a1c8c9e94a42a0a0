#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "rieszlab/core.hpp"

namespace rieszlab {

struct CheckResult {
  std::string name;
  bool pass = false;
  std::string detail;
  double elapsed_s = 0.0;
};

// Injectable s = -1 reference evaluator so a corrupted double can be used to
// prove the agreement check actually bites.
using BaxterFn = std::function<double(const Configuration&, const ModelParams&)>;

CheckResult check_hand_values();
CheckResult check_energy_triple_agreement(long configs, std::uint64_t seed,
                                          BaxterFn baxter = nullptr);
CheckResult check_partition_bounds(std::uint64_t seed);
CheckResult check_exact_vs_mcmc(std::uint64_t seed);
CheckResult check_transport_bound_chain(std::uint64_t seed);
CheckResult check_matching_optimality(long instances, std::uint64_t seed);
CheckResult check_hyperuniformity_contrast(std::uint64_t seed);
CheckResult check_shift_uniformity(std::uint64_t seed);
CheckResult check_rigidity_predictor(std::uint64_t seed);
CheckResult check_tiled_bound(std::uint64_t seed);
CheckResult check_entropy_bound(std::uint64_t seed);

// Numbered exactly like the acceptance suite; index in 1..11.
CheckResult run_acceptance_criterion(int index, std::uint64_t seed);

// fast: oracle and small cross-checks, seconds. full: the whole acceptance
// suite.
std::vector<CheckResult> run_selftest(bool full, std::uint64_t seed);

}  // namespace rieszlab
