#include "rieszlab/rigidity.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "rieszlab/stats.hpp"

namespace rieszlab {

namespace {

void check_curve_inputs(std::span<const Configuration> samples,
                        std::span<const double> lengths, const char* who) {
  if (samples.size() < 30)
    throw std::invalid_argument(std::string(who) +
                                ": need >= 30 samples for a stable estimate");
  double max_len = 0.0;
  for (double l : lengths) max_len = std::max(max_len, l);
  for (const Configuration& c : samples) {
    if (!c.window())
      throw std::invalid_argument(std::string(who) + ": sample carries no window");
    const Window& w = *c.window();
    const double ctr = w.center();
    if (ctr - 0.5 * max_len < w.left || ctr + 0.5 * max_len > w.right)
      throw std::invalid_argument(std::string(who) +
                                  ": window smaller than the largest interval");
  }
}

std::vector<double> centered_counts(std::span<const Configuration> samples,
                                    double length) {
  std::vector<double> counts;
  counts.reserve(samples.size());
  for (const Configuration& c : samples) {
    const double ctr = c.window()->center();
    counts.push_back(static_cast<double>(
        count(c, Window(ctr - 0.5 * length, ctr + 0.5 * length))));
  }
  return counts;
}

double frac(double x) { return x - std::floor(x); }

}  // namespace

std::vector<CurvePoint> variance_curve(std::span<const Configuration> samples,
                                       std::span<const double> lengths) {
  check_curve_inputs(samples, lengths, "variance_curve");
  std::vector<CurvePoint> curve;
  curve.reserve(lengths.size());
  for (double l : lengths) {
    const std::vector<double> counts = centered_counts(samples, l);
    const SampleStats st = sample_stats(counts);
    curve.push_back({l, st.var, jackknife_se_variance(counts),
                     static_cast<long>(counts.size())});
  }
  return curve;
}

std::vector<CurvePoint> discrepancy_stats(std::span<const Configuration> samples,
                                          std::span<const double> lengths) {
  check_curve_inputs(samples, lengths, "discrepancy_stats");
  std::vector<CurvePoint> curve;
  curve.reserve(lengths.size());
  for (double l : lengths) {
    std::vector<double> devs = centered_counts(samples, l);
    for (double& d : devs) d = std::fabs(d - l);
    const SampleStats st = sample_stats(devs);
    curve.push_back({l, st.mean, st.se, static_cast<long>(devs.size())});
  }
  return curve;
}

ShiftReport shift_estimator(const Configuration& cfg, double origin, long m) {
  if (m < 1) throw std::invalid_argument("shift_estimator: depth must be >= 1");
  const std::vector<double> xs = cfg.expanded();
  auto first_right = std::upper_bound(xs.begin(), xs.end(), origin);
  const long nright = static_cast<long>(xs.end() - first_right);
  if (nright < m)
    throw std::invalid_argument("shift_estimator: fewer than m atoms right of origin");

  auto avg_right = [&](long depth) {
    double acc = 0.0;
    for (long j = 0; j < depth; ++j)
      acc += *(first_right + j) - static_cast<double>(j);
    return acc / static_cast<double>(depth);
  };
  ShiftReport rep;
  rep.m = m;
  rep.phi = avg_right(m);
  rep.u = frac(rep.phi);
  rep.depth_residual = std::fabs(rep.phi - avg_right(std::max<long>(1, m / 2)));

  const long nleft = static_cast<long>(first_right - xs.begin());
  if (nleft >= m) {
    double acc = 0.0;
    for (long j = 0; j < m; ++j)
      acc += *(first_right - 1 - j) + static_cast<double>(j) + 1.0;
    rep.lr_gap = std::fabs(rep.phi - acc / static_cast<double>(m));
  } else {
    rep.lr_gap = std::numeric_limits<double>::quiet_NaN();
  }
  return rep;
}

bool UniformityReport::pass(double alpha) const {
  for (double p : fourier_p)
    if (p <= alpha) return false;
  return ks_p > alpha;
}

UniformityReport uniformity_test(std::span<const double> values) {
  if (values.size() < 50)
    throw std::invalid_argument("uniformity_test: need >= 50 values");
  UniformityReport rep;
  rep.n = values.size();
  const double n = static_cast<double>(values.size());
  for (int k = 1; k <= 5; ++k) {
    double re = 0.0, im = 0.0;
    for (double u : values) {
      const double a = 2.0 * M_PI * static_cast<double>(k) * u;
      re += std::cos(a);
      im += std::sin(a);
    }
    const double amp = std::sqrt(re * re + im * im) / n;
    rep.fourier_amp[static_cast<std::size_t>(k - 1)] = amp;
    // Under the null, n |S_k|^2 is asymptotically Exp(1).
    rep.fourier_p[static_cast<std::size_t>(k - 1)] = std::exp(-n * amp * amp);
  }
  const KsResult ks = ks_test(values, [](double x) {
    return std::clamp(x, 0.0, 1.0);
  });
  rep.ks_d = ks.d;
  rep.ks_p = ks.p;
  return rep;
}

ExteriorView::ExteriorView(const Configuration& cfg, const Window& domain)
    : domain_(domain) {
  const std::vector<double> xs = cfg.expanded();
  for (double x : xs) {
    // The domain is half open, so its right endpoint is already exterior.
    if (x >= domain.right) right_.push_back(x);
    if (x < domain.left) left_.push_back(x);
  }
  std::sort(right_.begin(), right_.end());
  std::sort(left_.begin(), left_.end(), std::greater<double>());
}

RigidityReport exterior_count_predictor(const ExteriorView& view, long m,
                                        std::int64_t actual) {
  if (m < 1)
    throw std::invalid_argument("exterior_count_predictor: depth must be >= 1");
  const auto& right = view.right_ascending();
  const auto& left = view.left_descending();
  if (static_cast<long>(right.size()) < m || static_cast<long>(left.size()) < m)
    throw std::invalid_argument(
        "exterior_count_predictor: fewer than m exterior atoms on a side");

  auto avg_right = [&](long depth) {
    double acc = 0.0;
    for (long j = 0; j < depth; ++j)
      acc += right[static_cast<std::size_t>(j)] - static_cast<double>(j);
    return acc / static_cast<double>(depth);
  };
  auto avg_left = [&](long depth) {
    double acc = 0.0;
    for (long j = 0; j < depth; ++j)
      acc += left[static_cast<std::size_t>(j)] + static_cast<double>(j);
    return acc / static_cast<double>(depth);
  };

  RigidityReport rep;
  rep.domain = view.domain();
  rep.m = m;
  rep.actual = actual;
  rep.s_right = avg_right(m);
  rep.s_left = avg_left(m);
  const long half = std::max<long>(1, m / 2);
  rep.res_right = std::fabs(rep.s_right - avg_right(half));
  rep.res_left = std::fabs(rep.s_left - avg_left(half));
  const double diff = rep.s_right - rep.s_left;
  const double rounded = std::round(diff);
  rep.tie_flag = std::fabs(diff - rounded) >= 0.5 - 1e-12;
  rep.predicted = std::max<std::int64_t>(
      0, static_cast<std::int64_t>(std::llround(diff)) - 1);
  return rep;
}

RigidityReport exterior_count_predictor(const Configuration& cfg,
                                        const Window& domain, long m) {
  const ExteriorView view(cfg, domain);
  return exterior_count_predictor(view, m, count(cfg, domain));
}

}  // namespace rieszlab
