#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "rieszlab/core.hpp"
#include "rieszlab/parallel.hpp"
#include "rieszlab/stats.hpp"

namespace rieszlab {

// Independent draws with provenance. `energies` is aligned with `configs`
// when the producer tracks energy (MCMC and thermodynamic integration do).
struct SampleBatch {
  std::vector<Configuration> configs;
  std::vector<double> energies;
  std::uint64_t seed = 0;
  std::string provenance;
};

struct SamplerReport {
  double acceptance_rate = 1.0;  // post burn-in
  double iact = 1.0;             // of the thinned energy series
  double ess = 0.0;
  double sigma_final = 0.0;
  long steps = 0;
  std::uint64_t seed = 0;
};

struct McmcOptions {
  long steps = 100000;    // post burn-in single-particle proposals
  long burn_in = 10000;
  long thin = 100;        // proposals between recorded samples
  double sigma_prop = -1.0;  // negative = auto: 1/sqrt(beta)
  double p_global = 0.1;     // probability of a full uniform redraw proposal
  bool adapt = true;         // tune sigma during burn-in only
};

// Metropolis chain for the density e^{-beta H} against n i.i.d. uniforms on
// the box. Single-particle proposals, O(n) incremental energy updates, cached
// energy revalidated every 10^4 proposals. At beta = 0 the draws are direct.
SampleBatch mcmc_sample(const ModelParams& params, const McmcOptions& opt,
                        RandomStream& rs, SamplerReport* report = nullptr);

// Independent chains on disjoint substreams, batches concatenated.
SampleBatch mcmc_sample_chains(const ModelParams& params, const McmcOptions& opt,
                               int chains, RandomStream& rs,
                               std::vector<SamplerReport>* reports = nullptr,
                               Exec exec = Exec::parallel);

// s = -1 only: draws x_j ~ Normal(y_j, 1/(2 beta)) independently and accepts
// iff strictly ordered and inside the box. Throws after max_attempts
// rejections (the message advises the MCMC fallback).
Configuration exact_coulomb_sample(const ModelParams& params, RandomStream& rs,
                                   long max_attempts = 1000000,
                                   long* attempts_out = nullptr);

struct LogZEstimate {
  double log_z = 0.0;
  double se = 0.0;          // from the per-point MC errors
  double refinement = 0.0;  // |full - half grid| / 3
  std::vector<double> betas;
  std::vector<double> mean_energies;
  std::vector<double> se_energies;
};

std::vector<double> uniform_beta_grid(double beta, int points = 21);

// Thermodynamic integration log Z(beta) = -int_0^beta Ebar, trapezoid rule
// over the grid, MCMC (direct sampling at 0) for each mean energy.
LogZEstimate estimate_log_partition(const ModelParams& params,
                                    std::span<const double> beta_grid,
                                    long samples_per_point, RandomStream& rs,
                                    Exec exec = Exec::parallel);

struct PartitionBoundsReport {
  double log_z = 0.0;
  double lower = 0.0;  // -C n with C = 1 + beta * (mean cell energy)
  double upper = 0.0;
  double c_const = 0.0;
  bool ok = false;
};
PartitionBoundsReport verify_partition_bounds(const ModelParams& params,
                                              double log_z);

// Mean energy under the unit-intensity Poisson process on the box (this is
// the reference measure side of the entropy formula, not the Gibbs measure).
SampleStats poisson_mean_energy(const ModelParams& params, long samples,
                                RandomStream& rs, Exec exec = Exec::parallel);

struct EntropyReport {
  double entropy = 0.0;
  double lower = 0.0;
  double upper = 0.0;  // (C + 1) n
  double c_const = 0.0;
  bool ok = false;
};

// Ent(P_n | Poi) = -beta E_Poi[H] - log Z + n - n log n + log n!.
EntropyReport entropy_bound_check(const ModelParams& params,
                                  double poisson_mean_h, double log_z);

}  // namespace rieszlab
