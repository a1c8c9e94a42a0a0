#pragma once

#include <cstdint>
#include <functional>
#include <span>
#include <vector>

#include "rieszlab/core.hpp"
#include "rieszlab/parallel.hpp"
#include "rieszlab/stats.hpp"

namespace rieszlab {

struct MatchPair {
  double source = 0.0;
  double target = 0.0;
  double mass = 1.0;
};

// Monotone coupling: sources and targets both nondecreasing along the list.
struct Matching {
  std::vector<MatchPair> pairs;
  double p = 2.0;
  double cost = 0.0;

  bool well_ordered() const;
};

struct TransportReport {
  double total_cost = 0.0;
  double cost_per_length = 0.0;
  double window_length = 0.0;
  double p = 2.0;
};

// Pairs the i-th smallest source with the i-th smallest target. In one
// dimension this is optimal for every p >= 1 (uniquely so for p > 1).
Matching monotone_match_points(std::span<const double> sources,
                               std::span<const double> targets, double p);

// int over [l, l+1) of |a - t|^p dt, closed form valid for any a.
double unit_block_cost(double a, double l, double p);

// Transports the j-th unit-length block of the window to the j-th sorted atom
// (multiplicities expanded). Requires total mass == window length.
TransportReport monotone_cost_to_lebesgue(const Configuration& cfg,
                                          const Window& window, double p);

// Monotone-matches atoms to the lattice sites {j + reference_shift} covering
// the config window; returns (site index j, displacement atom - site). A
// count mismatch is trimmed symmetrically about the center.
std::vector<std::pair<std::int64_t, double>> perturbation_extract(
    const Configuration& cfg, double reference_shift);

enum class TransportTarget { lebesgue, lattice };

// Phase of the target grid. `window` pins blocks to the window edge (the
// finite-volume cost against that fixed box). `free` lets each sample slide
// the grid by the scalar shift minimizing its cost, matching the stationary
// cost, where the coupling shifts the target along with the configuration.
enum class PhaseAnchor { window, free };

// Monotone cost of the restriction to `target_window` against unit blocks
// (lebesgue) or cell midpoints (lattice). Mass mismatch with the block count
// is handled by trimming equally from both ends, so any process can be fed in.
double windowed_cost(const Configuration& cfg, const Window& target_window,
                     TransportTarget target, double p,
                     PhaseAnchor anchor = PhaseAnchor::window);

struct CostCurvePoint {
  double length = 0.0;
  double mean_cost_per_length = 0.0;
  double stderr_ = 0.0;
  long samples = 0;
};

// Mean per-unit-length monotone cost of the restriction to centered windows
// of the given lengths, with the target grid phase chosen freely per sample
// (the stationary cost pays no window-alignment penalty; a stationarized unit
// lattice vs lebesgue sits at exactly 1/12 for p=2). A flat curve in the
// length indicates a finite per-volume transport cost; growth indicates
// divergence. Mass mismatch is handled by trimming quantile blocks from the
// center outward, which biases upward (conservative for flatness claims).
std::vector<CostCurvePoint> stationary_cost_estimator(
    const std::function<Configuration(RandomStream&)>& sampler,
    TransportTarget target, double p, std::span<const double> lengths,
    long samples, RandomStream& stream, Exec exec = Exec::parallel);

struct CostBound {
  double value = 0.0;
  double stderr_ = 0.0;
  long samples = 0;
};

// Monte Carlo estimate of E[W_p^p(tile config, Leb_tile)] / tile length; an
// upper bound for the stationary per-volume cost of the tiled process.
CostBound tiled_cost_bound(
    const std::function<Configuration(RandomStream&)>& tile_sampler, double p,
    long samples, RandomStream& stream, Exec exec = Exec::parallel);

}  // namespace rieszlab
