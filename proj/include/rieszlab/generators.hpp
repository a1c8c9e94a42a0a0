#pragma once

#include <cstdint>
#include <functional>
#include <vector>

#include "rieszlab/core.hpp"

namespace rieszlab {

// Law of the i.i.d. site displacements of a perturbed lattice.
class PerturbationLaw {
 public:
  enum class Kind { gaussian, uniform, laplace, constant };

  static PerturbationLaw gaussian(double sigma);
  static PerturbationLaw uniform(double half_width);
  static PerturbationLaw laplace(double scale);
  static PerturbationLaw constant(double c);

  Kind kind() const { return kind_; }
  double parameter() const { return param_; }
  // Dispersion scale used for margin sizing (0 for constant).
  double scale() const;
  // E|p| in closed form; handy as a test oracle.
  double mean_abs() const;
  double sample(RandomStream& rs) const;
  std::string name() const;

 private:
  PerturbationLaw(Kind k, double p) : kind_(k), param_(p) {}
  Kind kind_;
  double param_;
};

// Law of the multiplicity N in the clustered counterexample process,
// supported on {1, ..., n_max}.
class MassLaw {
 public:
  static MassLaw zipf2(int n_max);  // a_n proportional to 1/n^2
  static MassLaw geometric(double q, int n_max);
  static MassLaw uniform_range(int lo, int hi);
  static MassLaw fixed(int n);

  std::int64_t sample(RandomStream& rs) const;
  double mean() const;
  // sum a_n n/2: the per-volume L1 transport cost of the process.
  double half_mean() const;
  const std::vector<double>& probabilities() const { return probs_; }  // n = 1..

 private:
  explicit MassLaw(std::vector<double> probs);
  std::vector<double> probs_;
  std::vector<double> cdf_;
};

Configuration sample_poisson(const Window& window, double intensity,
                             RandomStream& rs);

// Atoms {j + U : j in Z} inside the window, U uniform on [0,1).
Configuration sample_stationarized_lattice(const Window& window, RandomStream& rs);

// Atoms {j + U + p_j} restricted to the window. Sites are generated on the
// window padded by `margin` (negative = auto: max(10, 10 * law scale)) so
// atoms perturbing inward across the edge are not lost.
Configuration sample_perturbed_lattice(const Window& window,
                                       const PerturbationLaw& law, RandomStream& rs,
                                       double margin = -1.0);

// One global draw N ~ mass law, U uniform on [0, N); atoms {N k + U} with
// multiplicity N inside the window.
Configuration sample_counterexample(const Window& window, const MassLaw& law,
                                    RandomStream& rs);

// Tiles the line by length-m boxes with one global uniform shift U in [0, m),
// fills each tile covering the target (padded by one tile each side) with an
// independent copy from the tile sampler, restricts to the target. The tile
// sampler must produce configurations on the centered window [-m/2, m/2).
Configuration stationarize(
    const std::function<Configuration(RandomStream&)>& tile_sampler,
    double tile_length, const Window& target, RandomStream& rs);

}  // namespace rieszlab
