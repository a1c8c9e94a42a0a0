#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace rieszlab {

// Half-open interval [left, right). Used everywhere so tilings of the line
// partition it without double counting.
struct Window {
  double left = 0.0;
  double right = 1.0;

  Window() = default;
  Window(double l, double r) : left(l), right(r) {
    if (!(l < r)) throw std::invalid_argument("Window: need left < right");
  }
  static Window centered(double length) {
    return Window(-0.5 * length, 0.5 * length);
  }
  double length() const { return right - left; }
  double center() const { return 0.5 * (left + right); }
  bool contains(double x) const { return x >= left && x < right; }
};

struct Atom {
  double pos = 0.0;
  std::int64_t mult = 1;
};

// Finite point configuration with integer multiplicities.
// Canonical form: atoms sorted by position, multiplicities positive, and
// positions closer than merge_eps collapsed into a single atom (anchored at
// the leftmost position of the cluster). Construction from any permutation
// of the same atoms yields the identical canonical form.
class Configuration {
 public:
  static constexpr double merge_eps = 1e-12;

  Configuration() = default;
  explicit Configuration(std::vector<Atom> atoms,
                         std::optional<Window> window = std::nullopt);
  static Configuration from_positions(std::span<const double> xs,
                                      std::optional<Window> window = std::nullopt);

  const std::vector<Atom>& atoms() const { return atoms_; }
  const std::optional<Window>& window() const { return window_; }
  bool empty() const { return atoms_.empty(); }
  std::size_t size() const { return atoms_.size(); }
  std::int64_t total_mass() const { return mass_; }

  // Positions repeated by multiplicity, ascending.
  std::vector<double> expanded() const;

  bool has_multiplicity() const;

 private:
  std::vector<Atom> atoms_;
  std::optional<Window> window_;
  std::int64_t mass_ = 0;
};

// Mass in [iv.left, iv.right).
std::int64_t count(const Configuration& cfg, const Window& iv);

// Shift all atoms (and the window, if any) by u.
Configuration translate(const Configuration& cfg, double u);

// Atoms inside [iv.left, iv.right); result carries iv as its window.
Configuration restrict_to(const Configuration& cfg, const Window& iv);

// Model parameters for the long-range gas: exponent s in (-2,0), inverse
// temperature beta > 0, particle number n >= 0 (n = 0 only meaningful for
// degenerate energy evaluations; samplers require n >= 1).
struct ModelParams {
  double s = -1.0;
  double beta = 1.0;
  std::int64_t n = 1;

  ModelParams() = default;
  ModelParams(double s_, double beta_, std::int64_t n_) : s(s_), beta(beta_), n(n_) {
    if (!(s > -2.0 && s < 0.0))
      throw std::invalid_argument("ModelParams: s must lie in (-2, 0)");
    if (!(beta >= 0.0)) throw std::invalid_argument("ModelParams: beta must be >= 0");
    if (n < 0) throw std::invalid_argument("ModelParams: n must be >= 0");
  }
  Window box() const { return Window::centered(static_cast<double>(n)); }
};

// Counter-based random stream: a keyed SplitMix64 walk. Draws depend only on
// (key, counter), so substreams derived by index are reproducible no matter
// which order or thread consumes them. Same seed => bit-identical sequences.
class RandomStream {
 public:
  explicit RandomStream(std::uint64_t seed);

  // Independent child stream; stable under scheduling.
  RandomStream substream(std::uint64_t index) const;

  std::uint64_t next_u64();
  double uniform();                      // [0, 1)
  double uniform(double a, double b);    // [a, b)
  double gaussian();                     // N(0, 1)
  double gaussian(double mean, double sigma);
  double exponential();                  // mean 1
  double laplace(double scale);
  std::int64_t poisson(double mean);
  // Uniform in {0, ..., m-1} without modulo bias.
  std::uint64_t uniform_index(std::uint64_t m);

 private:
  RandomStream(std::uint64_t key, int /*tag*/) : key_(key) {}
  std::uint64_t key_ = 0;
  std::uint64_t counter_ = 0;
  bool cached_valid_ = false;
  double cached_gauss_ = 0.0;
};

}  // namespace rieszlab
