#pragma once

#include <cstdint>
#include <functional>
#include <span>
#include <vector>

namespace rieszlab {

struct SampleStats {
  std::size_t n = 0;
  double mean = 0.0;
  double var = 0.0;  // unbiased
  double se = 0.0;   // of the mean
};

SampleStats sample_stats(std::span<const double> xs);

// Delete-one jackknife standard error of the (unbiased) sample variance.
double jackknife_se_variance(std::span<const double> xs);

double normal_cdf(double x);

// One-sample Kolmogorov-Smirnov against a continuous CDF.
struct KsResult {
  double d = 0.0;
  double p = 1.0;
};
KsResult ks_test(std::span<const double> xs, const std::function<double(double)>& cdf);
KsResult ks_two_sample(std::span<const double> a, std::span<const double> b);

// Trend test on a short series. Exact null distribution of the S statistic is
// enumerated for n <= 8, normal approximation (continuity-corrected) beyond.
struct MannKendall {
  int s = 0;
  double z = 0.0;
  double p_increasing = 1.0;  // one-sided: small means evidence of upward trend
  bool increasing_at(double alpha) const { return p_increasing < alpha; }
};
MannKendall mann_kendall(std::span<const double> xs);

struct LinearFit {
  double slope = 0.0;
  double intercept = 0.0;
};
LinearFit linear_fit(std::span<const double> xs, std::span<const double> ys);

// Least squares for y ~ a*x + b*z (no intercept).
struct TwoTermFit {
  double a = 0.0;
  double b = 0.0;
};
TwoTermFit two_term_fit(std::span<const double> xs, std::span<const double> zs,
                        std::span<const double> ys);

// Integrated autocorrelation time with a self-consistent window cut-off.
double integrated_autocorr_time(std::span<const double> xs);

}  // namespace rieszlab
