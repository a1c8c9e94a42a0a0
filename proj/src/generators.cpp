#include "rieszlab/generators.hpp"

#include <cmath>
#include <stdexcept>

namespace rieszlab {

PerturbationLaw PerturbationLaw::gaussian(double sigma) {
  if (!(sigma > 0.0)) throw std::invalid_argument("gaussian law: sigma must be > 0");
  return PerturbationLaw(Kind::gaussian, sigma);
}
PerturbationLaw PerturbationLaw::uniform(double half_width) {
  if (!(half_width > 0.0))
    throw std::invalid_argument("uniform law: half_width must be > 0");
  return PerturbationLaw(Kind::uniform, half_width);
}
PerturbationLaw PerturbationLaw::laplace(double scale) {
  if (!(scale > 0.0)) throw std::invalid_argument("laplace law: scale must be > 0");
  return PerturbationLaw(Kind::laplace, scale);
}
PerturbationLaw PerturbationLaw::constant(double c) {
  return PerturbationLaw(Kind::constant, c);
}

double PerturbationLaw::scale() const {
  switch (kind_) {
    case Kind::gaussian:
    case Kind::uniform:
    case Kind::laplace:
      return param_;
    case Kind::constant:
      return 0.0;
  }
  return 0.0;
}

double PerturbationLaw::mean_abs() const {
  switch (kind_) {
    case Kind::gaussian:
      return param_ * std::sqrt(2.0 / M_PI);
    case Kind::uniform:
      return 0.5 * param_;
    case Kind::laplace:
      return param_;
    case Kind::constant:
      return std::fabs(param_);
  }
  return 0.0;
}

double PerturbationLaw::sample(RandomStream& rs) const {
  switch (kind_) {
    case Kind::gaussian:
      return param_ * rs.gaussian();
    case Kind::uniform:
      return rs.uniform(-param_, param_);
    case Kind::laplace:
      return rs.laplace(param_);
    case Kind::constant:
      return param_;  // consumes no randomness
  }
  return 0.0;
}

std::string PerturbationLaw::name() const {
  switch (kind_) {
    case Kind::gaussian:
      return "gaussian";
    case Kind::uniform:
      return "uniform";
    case Kind::laplace:
      return "laplace";
    case Kind::constant:
      return "constant";
  }
  return "?";
}

MassLaw::MassLaw(std::vector<double> probs) : probs_(std::move(probs)) {
  double total = 0.0;
  for (double p : probs_) {
    if (p < 0.0) throw std::invalid_argument("MassLaw: negative probability");
    total += p;
  }
  if (!(total > 0.0)) throw std::invalid_argument("MassLaw: empty law");
  cdf_.reserve(probs_.size());
  double acc = 0.0;
  for (double& p : probs_) {
    p /= total;
    acc += p;
    cdf_.push_back(acc);
  }
  cdf_.back() = 1.0;
}

MassLaw MassLaw::zipf2(int n_max) {
  if (n_max < 1) throw std::invalid_argument("zipf2: n_max must be >= 1");
  std::vector<double> p(static_cast<std::size_t>(n_max));
  for (int n = 1; n <= n_max; ++n)
    p[static_cast<std::size_t>(n - 1)] = 1.0 / (static_cast<double>(n) * n);
  return MassLaw(std::move(p));
}

MassLaw MassLaw::geometric(double q, int n_max) {
  if (!(q > 0.0 && q < 1.0)) throw std::invalid_argument("geometric: need 0 < q < 1");
  if (n_max < 1) throw std::invalid_argument("geometric: n_max must be >= 1");
  std::vector<double> p(static_cast<std::size_t>(n_max));
  double w = 1.0;
  for (int n = 1; n <= n_max; ++n) {
    p[static_cast<std::size_t>(n - 1)] = w;
    w *= q;
  }
  return MassLaw(std::move(p));
}

MassLaw MassLaw::uniform_range(int lo, int hi) {
  if (lo < 1 || hi < lo) throw std::invalid_argument("uniform_range: need 1 <= lo <= hi");
  std::vector<double> p(static_cast<std::size_t>(hi), 0.0);
  for (int n = lo; n <= hi; ++n) p[static_cast<std::size_t>(n - 1)] = 1.0;
  return MassLaw(std::move(p));
}

MassLaw MassLaw::fixed(int n) { return uniform_range(n, n); }

std::int64_t MassLaw::sample(RandomStream& rs) const {
  const double u = rs.uniform();
  for (std::size_t i = 0; i < cdf_.size(); ++i)
    if (u < cdf_[i]) return static_cast<std::int64_t>(i + 1);
  return static_cast<std::int64_t>(cdf_.size());
}

double MassLaw::mean() const {
  double m = 0.0;
  for (std::size_t i = 0; i < probs_.size(); ++i)
    m += probs_[i] * static_cast<double>(i + 1);
  return m;
}

double MassLaw::half_mean() const { return 0.5 * mean(); }

Configuration sample_poisson(const Window& window, double intensity,
                             RandomStream& rs) {
  if (intensity < 0.0) throw std::invalid_argument("sample_poisson: intensity < 0");
  const std::int64_t n = rs.poisson(intensity * window.length());
  std::vector<double> xs(static_cast<std::size_t>(n));
  for (double& x : xs) x = rs.uniform(window.left, window.right);
  return Configuration::from_positions(xs, window);
}

Configuration sample_stationarized_lattice(const Window& window, RandomStream& rs) {
  const double u = rs.uniform();
  std::vector<double> xs;
  const std::int64_t j_lo = static_cast<std::int64_t>(std::ceil(window.left - u));
  for (std::int64_t j = j_lo;; ++j) {
    const double x = static_cast<double>(j) + u;
    if (x >= window.right) break;
    if (x >= window.left) xs.push_back(x);
  }
  return Configuration::from_positions(xs, window);
}

Configuration sample_perturbed_lattice(const Window& window,
                                       const PerturbationLaw& law, RandomStream& rs,
                                       double margin) {
  if (margin < 0.0) margin = std::max(10.0, 10.0 * law.scale());
  const double u = rs.uniform();
  std::vector<double> xs;
  const double lo = window.left - margin, hi = window.right + margin;
  const std::int64_t j_lo = static_cast<std::int64_t>(std::ceil(lo - u));
  for (std::int64_t j = j_lo;; ++j) {
    const double site = static_cast<double>(j) + u;
    if (site >= hi) break;
    const double x = site + law.sample(rs);
    if (window.contains(x)) xs.push_back(x);
  }
  return Configuration::from_positions(xs, window);
}

Configuration sample_counterexample(const Window& window, const MassLaw& law,
                                    RandomStream& rs) {
  const std::int64_t n = law.sample(rs);
  const double period = static_cast<double>(n);
  const double u = rs.uniform(0.0, period);
  std::vector<Atom> atoms;
  const std::int64_t k_lo =
      static_cast<std::int64_t>(std::ceil((window.left - u) / period));
  for (std::int64_t k = k_lo;; ++k) {
    const double x = static_cast<double>(k) * period + u;
    if (x >= window.right) break;
    if (x >= window.left) atoms.push_back({x, n});
  }
  return Configuration(std::move(atoms), window);
}

Configuration stationarize(
    const std::function<Configuration(RandomStream&)>& tile_sampler,
    double tile_length, const Window& target, RandomStream& rs) {
  if (!(tile_length > 0.0)) throw std::invalid_argument("stationarize: tile length <= 0");
  const double m = tile_length;
  const double u = rs.uniform(0.0, m);
  // Fresh key per call so repeated calls on one stream produce fresh tiles.
  RandomStream tile_root(rs.next_u64());
  const std::int64_t k_lo =
      static_cast<std::int64_t>(std::floor((target.left - u) / m)) - 1;
  const std::int64_t k_hi =
      static_cast<std::int64_t>(std::floor((target.right - u) / m)) + 1;
  std::vector<Atom> atoms;
  for (std::int64_t k = k_lo; k <= k_hi; ++k) {
    const std::uint64_t idx =
        k >= 0 ? 2 * static_cast<std::uint64_t>(k)
               : 2 * static_cast<std::uint64_t>(-(k + 1)) + 1;
    RandomStream sub = tile_root.substream(idx);
    Configuration tile = tile_sampler(sub);
    if (!tile.window() || std::fabs(tile.window()->length() - m) > 1e-9 ||
        std::fabs(tile.window()->center()) > 1e-9)
      throw std::invalid_argument(
          "stationarize: tile sampler must emit configs on the centered tile window");
    const double shift = static_cast<double>(k) * m + u + 0.5 * m;
    for (const Atom& a : tile.atoms()) {
      const double x = a.pos + shift;
      if (target.contains(x)) atoms.push_back({x, a.mult});
    }
  }
  return Configuration(std::move(atoms), target);
}

}  // namespace rieszlab
