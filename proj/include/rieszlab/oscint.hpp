#pragma once

#include <functional>
#include <stdexcept>
#include <vector>

#include "rieszlab/core.hpp"
#include "rieszlab/parallel.hpp"

namespace rieszlab {

struct QuadratureSettings {
  double abs_tol = 1e-8;
  double split_point = 1.0;   // near-zero substitution below, panel sweep above
  double xi_cutoff = 32.0;    // start of the semi-analytic tail; doubled if needed
  int max_panels = 200000;
  Exec exec = Exec::parallel;
};

// Thrown when the requested tolerance cannot be certified; carries the bound
// that was actually achieved.
class QuadratureError : public std::runtime_error {
 public:
  QuadratureError(const std::string& what, double achieved)
      : std::runtime_error(what), achieved_bound(achieved) {}
  double achieved_bound;
};

struct QuadOutcome {
  double value = 0.0;
  double err = 0.0;  // rigorous-leaning absolute bound
  long panels = 0;
};

// Adaptive Gauss-Kronrod (G7,K15): seeds panels of width <= init_width, then
// bisects the worst until the summed estimate drops below abs_tol.
QuadOutcome integrate_gk(const std::function<double(double)>& f, double lo, double hi,
                         double abs_tol, double init_width, int max_panels,
                         Exec exec = Exec::serial);

// Squared modulus of the Fourier transform of (config - Lebesgue on window),
// coordinates re-centered so the window is symmetric.
class SpectralDensity {
 public:
  SpectralDensity(const Configuration& cfg, const Window& window);
  double operator()(double xi) const;

  double length() const { return length_; }
  double mass() const { return mass_; }
  double sum_mult_sq() const { return sum_mult_sq_; }
  const std::vector<double>& positions() const { return xs_; }  // centered
  const std::vector<double>& mults() const { return ms_; }

 private:
  std::vector<double> xs_;
  std::vector<double> ms_;
  double length_ = 0.0;
  double mass_ = 0.0;
  double sum_mult_sq_ = 0.0;
};

// Incomplete oscillatory power integrals: int_w^inf trig(u) u^{-p} du for
// p > 1, w > 0. Series below u=1, Gauss-Kronrod panels up to u=40, then the
// integration-by-parts expansion whose remainder is explicitly bounded.
struct OscValue {
  double value = 0.0;
  double err = 0.0;
};
OscValue cos_power_tail(double p, double w);
OscValue sin_power_tail(double p, double w);

// int_Xi^inf |nu_hat(xi)|^2 xi^{-q} dxi, assembled per frequency component.
OscValue spectral_power_tail(const SpectralDensity& sd, double q, double Xi);

// The integrals below are over the full line (even integrand, so twice the
// half-line value).

// int |nu_hat|^2 |xi|^{-q} over |xi| <= split (flattening substitution near 0;
// requires q < 3 so the integrand is locally integrable for neutral data).
QuadOutcome spectral_low_power(const SpectralDensity& sd, double q,
                               const QuadratureSettings& qs);
// ... over |xi| > split (panel sweep to the cutoff, analytic tail beyond).
QuadOutcome spectral_high_power(const SpectralDensity& sd, double q,
                                const QuadratureSettings& qs);
QuadOutcome spectral_full_power(const SpectralDensity& sd, double q,
                                const QuadratureSettings& qs);

// int ghat(xi) |nu_hat(xi)|^2 dxi over the full line for the short-range
// kernels: ghat_exp = 2/(1+xi^2), ghat_gauss = sqrt(2 pi) e^{-xi^2/2}.
QuadOutcome spectral_exp_weight(const SpectralDensity& sd, const QuadratureSettings& qs,
                                bool above_split_only = false);
QuadOutcome spectral_gauss_weight(const SpectralDensity& sd, const QuadratureSettings& qs);

}  // namespace rieszlab
