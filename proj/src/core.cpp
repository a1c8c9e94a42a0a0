#include "rieszlab/core.hpp"

#include <algorithm>
#include <cmath>

namespace rieszlab {

Configuration::Configuration(std::vector<Atom> atoms, std::optional<Window> window)
    : window_(window) {
  for (const Atom& a : atoms) {
    if (!std::isfinite(a.pos))
      throw std::invalid_argument("Configuration: non-finite position");
    if (a.mult <= 0)
      throw std::invalid_argument("Configuration: multiplicity must be positive");
  }
  std::sort(atoms.begin(), atoms.end(),
            [](const Atom& a, const Atom& b) { return a.pos < b.pos; });
  atoms_.reserve(atoms.size());
  for (const Atom& a : atoms) {
    if (!atoms_.empty() && a.pos - atoms_.back().pos < merge_eps) {
      atoms_.back().mult += a.mult;  // cluster anchored at leftmost position
    } else {
      atoms_.push_back(a);
    }
    mass_ += a.mult;
  }
}

Configuration Configuration::from_positions(std::span<const double> xs,
                                            std::optional<Window> window) {
  std::vector<Atom> atoms;
  atoms.reserve(xs.size());
  for (double x : xs) atoms.push_back({x, 1});
  return Configuration(std::move(atoms), window);
}

std::vector<double> Configuration::expanded() const {
  std::vector<double> out;
  out.reserve(static_cast<std::size_t>(mass_));
  for (const Atom& a : atoms_)
    for (std::int64_t k = 0; k < a.mult; ++k) out.push_back(a.pos);
  return out;
}

bool Configuration::has_multiplicity() const {
  for (const Atom& a : atoms_)
    if (a.mult > 1) return true;
  return false;
}

std::int64_t count(const Configuration& cfg, const Window& iv) {
  const auto& atoms = cfg.atoms();
  auto lo = std::lower_bound(atoms.begin(), atoms.end(), iv.left,
                             [](const Atom& a, double v) { return a.pos < v; });
  auto hi = std::lower_bound(atoms.begin(), atoms.end(), iv.right,
                             [](const Atom& a, double v) { return a.pos < v; });
  std::int64_t m = 0;
  for (auto it = lo; it != hi; ++it) m += it->mult;
  return m;
}

Configuration translate(const Configuration& cfg, double u) {
  std::vector<Atom> atoms = cfg.atoms();
  for (Atom& a : atoms) a.pos += u;
  std::optional<Window> w;
  if (cfg.window()) w = Window(cfg.window()->left + u, cfg.window()->right + u);
  return Configuration(std::move(atoms), w);
}

Configuration restrict_to(const Configuration& cfg, const Window& iv) {
  std::vector<Atom> kept;
  for (const Atom& a : cfg.atoms())
    if (iv.contains(a.pos)) kept.push_back(a);
  return Configuration(std::move(kept), iv);
}

namespace {

inline std::uint64_t mix64(std::uint64_t z) {
  z += 0x9e3779b97f4a7c15ULL;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

}  // namespace

RandomStream::RandomStream(std::uint64_t seed) : key_(mix64(seed ^ 0x6a09e667f3bcc908ULL)) {}

RandomStream RandomStream::substream(std::uint64_t index) const {
  std::uint64_t child = mix64(key_ ^ mix64(0xbb67ae8584caa73bULL + index));
  return RandomStream(child, 0);
}

std::uint64_t RandomStream::next_u64() {
  return mix64(key_ + 0x9e3779b97f4a7c15ULL * ++counter_);
}

double RandomStream::uniform() {
  return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
}

double RandomStream::uniform(double a, double b) {
  return a + (b - a) * uniform();
}

double RandomStream::gaussian() {
  if (cached_valid_) {
    cached_valid_ = false;
    return cached_gauss_;
  }
  // Box-Muller; u1 bounded away from 0 by construction of uniform().
  double u1 = 0.0;
  do {
    u1 = uniform();
  } while (u1 <= 0.0);
  double u2 = uniform();
  double r = std::sqrt(-2.0 * std::log(u1));
  double theta = 6.283185307179586476925286766559 * u2;
  cached_gauss_ = r * std::sin(theta);
  cached_valid_ = true;
  return r * std::cos(theta);
}

double RandomStream::gaussian(double mean, double sigma) {
  return mean + sigma * gaussian();
}

double RandomStream::exponential() {
  double u;
  do {
    u = uniform();
  } while (u <= 0.0);
  return -std::log(u);
}

double RandomStream::laplace(double scale) {
  double u = uniform() - 0.5;
  double mag = -std::log(1.0 - 2.0 * std::fabs(u));
  return (u >= 0.0 ? scale : -scale) * mag;
}

std::int64_t RandomStream::poisson(double mean) {
  if (mean < 0.0 || !std::isfinite(mean))
    throw std::invalid_argument("poisson: mean must be finite and >= 0");
  if (mean == 0.0) return 0;
  // Exponential-gap method: count renewals of a unit Poisson process up to
  // time `mean`. O(mean) but immune to the e^{-mean} underflow of the
  // product-of-uniforms method.
  std::int64_t k = 0;
  double t = exponential();
  while (t <= mean) {
    ++k;
    t += exponential();
  }
  return k;
}

std::uint64_t RandomStream::uniform_index(std::uint64_t m) {
  if (m == 0) throw std::invalid_argument("uniform_index: m must be positive");
  const std::uint64_t limit = UINT64_MAX - UINT64_MAX % m;
  std::uint64_t v;
  do {
    v = next_u64();
  } while (v >= limit);
  return v % m;
}

}  // namespace rieszlab
