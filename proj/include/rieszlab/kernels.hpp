#pragma once

#include <stdexcept>
#include <string>

#include "rieszlab/core.hpp"

namespace rieszlab {

// C_s = Gamma((1-s)/2) / (-Gamma(s/2)) * sqrt(pi) * 2^{1-s}, s in (-2, 0).
double riesz_fourier_constant(double s);

// Mean energy of the one-particle-per-unit-cell configuration,
// -1/2 integral over [0,1]^2 of g_s(x-y) = 1/((1-s)(2-s)).
double cell_mean_energy(double s);

enum class KernelFamily { riesz, exponential, gaussian };

// Pair potentials used by the energy module. All three are positive-type:
//   riesz(s):    g(r) = -|r|^{-s},  ghat(xi) = C_s |xi|^{s-1}   (g(0) = 0)
//   exponential: g(r) = e^{-|r|},   ghat(xi) = 2/(1+xi^2)
//   gaussian:    g(r) = e^{-r^2/2}, ghat(xi) = sqrt(2 pi) e^{-xi^2/2}
class Kernel {
 public:
  static Kernel riesz(double s);
  static Kernel exponential();
  static Kernel gaussian();

  KernelFamily family() const { return family_; }
  double s() const;  // riesz only
  std::string name() const;

  double value_at(double r) const;
  double fourier_at(double xi) const;

  // B(x) = int_{window} g(x - y) dy, closed form (valid for x anywhere).
  double background(double x, const Window& w) const;

  // iint over window x window of g(x - y) dx dy, closed form.
  double background_double_integral(const Window& w) const;

 private:
  Kernel(KernelFamily f, double s) : family_(f), s_(s) {}
  KernelFamily family_;
  double s_;
};

}  // namespace rieszlab
