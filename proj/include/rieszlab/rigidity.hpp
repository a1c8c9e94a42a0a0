#pragma once

#include <array>
#include <cstdint>
#include <span>
#include <vector>

#include "rieszlab/core.hpp"

namespace rieszlab {

struct CurvePoint {
  double length = 0.0;
  double value = 0.0;
  double stderr_ = 0.0;
  long samples = 0;
};

// Across-sample variance of the count in centered intervals, jackknife
// errors. Bounded curve = hyperuniform of type I; slope 1 = Poisson-like.
std::vector<CurvePoint> variance_curve(std::span<const Configuration> samples,
                                       std::span<const double> lengths);

// Mean absolute discrepancy |count - length| per interval length.
std::vector<CurvePoint> discrepancy_stats(std::span<const Configuration> samples,
                                          std::span<const double> lengths);

struct ShiftReport {
  double phi = 0.0;       // depth-m average of (j-th atom right of origin) - j
  double u = 0.0;         // frac(phi), the phase observable in [0,1)
  long m = 0;
  double lr_gap = 0.0;    // |right estimate - left estimate|; NaN if no left data
  double depth_residual = 0.0;  // |phi_m - phi_{m/2}|, convergence diagnostic
};

ShiftReport shift_estimator(const Configuration& cfg, double origin, long m);

struct UniformityReport {
  std::array<double, 5> fourier_amp{};  // |mean of e^{2 pi i k u}|, k = 1..5
  std::array<double, 5> fourier_p{};
  double ks_d = 0.0;
  double ks_p = 1.0;
  std::size_t n = 0;

  bool pass(double alpha = 0.01) const;
};

// Tests a batch of phase values against Uniform[0,1): Rayleigh statistics on
// the first five Fourier modes plus Kolmogorov-Smirnov. Needs >= 50 values.
UniformityReport uniformity_test(std::span<const double> values);

// The exterior of a domain: only atoms outside [a, b) are copied in, so any
// computation from this view provably never reads the interior.
class ExteriorView {
 public:
  ExteriorView(const Configuration& cfg, const Window& domain);
  const std::vector<double>& right_ascending() const { return right_; }
  const std::vector<double>& left_descending() const { return left_; }
  const Window& domain() const { return domain_; }

 private:
  Window domain_;
  std::vector<double> right_;  // atoms > domain.right, ascending
  std::vector<double> left_;   // atoms < domain.left, descending
};

struct RigidityReport {
  Window domain{0.0, 1.0};
  std::int64_t predicted = 0;
  std::int64_t actual = 0;
  long m = 0;
  double s_right = 0.0;
  double s_left = 0.0;
  double res_right = 0.0;  // |avg_m - avg_{m/2}| per side
  double res_left = 0.0;
  bool tie_flag = false;  // rounding landed on a half-integer boundary

  bool agree() const { return predicted == actual; }
};

// Predicts the count inside the domain from exterior atoms alone: depth-m
// averages of (X_j - j) on the right and (Y_j + j) on the left; predicted
// count = round(S_R - S_L) - 1.
RigidityReport exterior_count_predictor(const ExteriorView& view, long m,
                                        std::int64_t actual);
RigidityReport exterior_count_predictor(const Configuration& cfg,
                                        const Window& domain, long m);

}  // namespace rieszlab
