#include "rieszlab/transport.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace rieszlab {

bool Matching::well_ordered() const {
  for (std::size_t i = 1; i < pairs.size(); ++i) {
    if (pairs[i].source < pairs[i - 1].source) return false;
    if (pairs[i].target < pairs[i - 1].target) return false;
  }
  return true;
}

Matching monotone_match_points(std::span<const double> sources,
                               std::span<const double> targets, double p) {
  if (sources.size() != targets.size())
    throw std::invalid_argument("monotone_match_points: count mismatch");
  if (!(p >= 1.0)) throw std::invalid_argument("monotone_match_points: need p >= 1");
  std::vector<double> s(sources.begin(), sources.end());
  std::vector<double> t(targets.begin(), targets.end());
  std::sort(s.begin(), s.end());
  std::sort(t.begin(), t.end());
  Matching m;
  m.p = p;
  m.pairs.reserve(s.size());
  for (std::size_t i = 0; i < s.size(); ++i) {
    m.pairs.push_back({s[i], t[i], 1.0});
    m.cost += std::pow(std::fabs(s[i] - t[i]), p);
  }
  return m;
}

double unit_block_cost(double a, double l, double p) {
  auto prim = [p](double t) {
    const double v = std::pow(std::fabs(t), p + 1.0) / (p + 1.0);
    return t >= 0.0 ? v : -v;
  };
  return prim(a - l) - prim(a - l - 1.0);
}

TransportReport monotone_cost_to_lebesgue(const Configuration& cfg,
                                          const Window& window, double p) {
  if (!(p >= 1.0))
    throw std::invalid_argument("monotone_cost_to_lebesgue: need p >= 1");
  const double L = window.length();
  const auto mass = cfg.total_mass();
  if (std::fabs(L - static_cast<double>(mass)) > 1e-9)
    throw std::invalid_argument(
        "monotone_cost_to_lebesgue: total mass must equal window length");
  TransportReport rep;
  rep.p = p;
  rep.window_length = L;
  const std::vector<double> xs = cfg.expanded();
  for (std::size_t j = 0; j < xs.size(); ++j)
    rep.total_cost += unit_block_cost(xs[j], window.left + static_cast<double>(j), p);
  rep.cost_per_length = rep.total_cost / L;
  return rep;
}

std::vector<std::pair<std::int64_t, double>> perturbation_extract(
    const Configuration& cfg, double reference_shift) {
  if (cfg.empty()) throw std::invalid_argument("perturbation_extract: empty config");
  if (!cfg.window())
    throw std::invalid_argument("perturbation_extract: config carries no window");
  const Window& w = *cfg.window();
  std::int64_t j_lo = static_cast<std::int64_t>(std::ceil(w.left - reference_shift));
  std::int64_t j_hi = static_cast<std::int64_t>(std::ceil(w.right - reference_shift)) - 1;
  if (j_hi < j_lo) throw std::invalid_argument("perturbation_extract: window too small");
  std::vector<double> xs = cfg.expanded();
  std::int64_t nsites = j_hi - j_lo + 1;
  std::int64_t natoms = static_cast<std::int64_t>(xs.size());
  const std::int64_t k = std::min(nsites, natoms);
  const std::int64_t drop_atoms = (natoms - k) / 2;
  const std::int64_t drop_sites = (nsites - k) / 2;
  std::vector<std::pair<std::int64_t, double>> out;
  out.reserve(static_cast<std::size_t>(k));
  for (std::int64_t i = 0; i < k; ++i) {
    const std::int64_t j = j_lo + drop_sites + i;
    const double site = static_cast<double>(j) + reference_shift;
    out.emplace_back(j, xs[static_cast<std::size_t>(drop_atoms + i)] - site);
  }
  return out;
}

// Central-trim cost of cfg restricted to a centered length-ell window.
double windowed_cost(const Configuration& cfg, const Window& target_window,
                     TransportTarget target, double p, PhaseAnchor anchor) {
  const Configuration inside = restrict_to(cfg, target_window);
  const double ell = target_window.length();
  const std::vector<double> xs = inside.expanded();
  const std::int64_t nblocks = static_cast<std::int64_t>(std::floor(ell + 1e-9));
  const std::int64_t natoms = static_cast<std::int64_t>(xs.size());
  const std::int64_t k = std::min(nblocks, natoms);
  if (k <= 0) return 0.0;
  const std::int64_t drop_atoms = (natoms - k) / 2;
  const std::int64_t drop_blocks = (nblocks - k) / 2;
  auto cost_at = [&](double shift) {
    double cost = 0.0;
    for (std::int64_t i = 0; i < k; ++i) {
      const double a = xs[static_cast<std::size_t>(drop_atoms + i)] - shift;
      const double l = target_window.left + static_cast<double>(drop_blocks + i);
      if (target == TransportTarget::lebesgue)
        cost += unit_block_cost(a, l, p);
      else
        cost += std::pow(std::fabs(a - (l + 0.5)), p);
    }
    return cost;
  };
  if (anchor == PhaseAnchor::window) return cost_at(0.0);
  // Free phase: slide the grid by the scalar shift minimizing the cost. For
  // p=2 that is the mean residual; otherwise ternary-search the convex cost.
  double rmin = std::numeric_limits<double>::infinity();
  double rmax = -rmin;
  double rsum = 0.0;
  for (std::int64_t i = 0; i < k; ++i) {
    const double mid = target_window.left +
                       static_cast<double>(drop_blocks + i) + 0.5;
    const double r = xs[static_cast<std::size_t>(drop_atoms + i)] - mid;
    rmin = std::min(rmin, r);
    rmax = std::max(rmax, r);
    rsum += r;
  }
  if (p == 2.0) return cost_at(rsum / static_cast<double>(k));
  double lo = rmin - 1.0, hi = rmax + 1.0;
  for (int it = 0; it < 200 && hi - lo > 1e-13; ++it) {
    const double m1 = lo + (hi - lo) / 3.0;
    const double m2 = hi - (hi - lo) / 3.0;
    if (cost_at(m1) <= cost_at(m2))
      hi = m2;
    else
      lo = m1;
  }
  return cost_at(0.5 * (lo + hi));
}

std::vector<CostCurvePoint> stationary_cost_estimator(
    const std::function<Configuration(RandomStream&)>& sampler,
    TransportTarget target, double p, std::span<const double> lengths,
    long samples, RandomStream& stream, Exec exec) {
  const std::vector<double> ells(lengths.begin(), lengths.end());
  std::vector<std::vector<double>> per_sample = indexed_map<std::vector<double>>(
      static_cast<std::size_t>(samples), exec, [&](std::size_t i) {
        RandomStream sub = stream.substream(static_cast<std::uint64_t>(i));
        const Configuration cfg = sampler(sub);
        const double c =
            cfg.window() ? cfg.window()->center() : 0.0;
        std::vector<double> row;
        row.reserve(ells.size());
        for (double ell : ells) {
          const Window w(c - 0.5 * ell, c + 0.5 * ell);
          row.push_back(windowed_cost(cfg, w, target, p, PhaseAnchor::free) / ell);
        }
        return row;
      });
  std::vector<CostCurvePoint> curve;
  curve.reserve(ells.size());
  std::vector<double> col(per_sample.size());
  for (std::size_t j = 0; j < ells.size(); ++j) {
    for (std::size_t i = 0; i < per_sample.size(); ++i) col[i] = per_sample[i][j];
    const SampleStats st = sample_stats(col);
    curve.push_back({ells[j], st.mean, st.se, static_cast<long>(st.n)});
  }
  return curve;
}

CostBound tiled_cost_bound(
    const std::function<Configuration(RandomStream&)>& tile_sampler, double p,
    long samples, RandomStream& stream, Exec exec) {
  std::vector<double> vals = indexed_map<double>(
      static_cast<std::size_t>(samples), exec, [&](std::size_t i) {
        RandomStream sub = stream.substream(static_cast<std::uint64_t>(i));
        const Configuration cfg = tile_sampler(sub);
        if (!cfg.window())
          throw std::invalid_argument("tiled_cost_bound: tile sampler must set a window");
        const TransportReport rep = monotone_cost_to_lebesgue(cfg, *cfg.window(), p);
        return rep.cost_per_length;
      });
  const SampleStats st = sample_stats(vals);
  return {st.mean, st.se, static_cast<long>(st.n)};
}

}  // namespace rieszlab
