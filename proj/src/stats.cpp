#include "rieszlab/stats.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace rieszlab {

SampleStats sample_stats(std::span<const double> xs) {
  SampleStats st;
  st.n = xs.size();
  if (st.n == 0) return st;
  double sum = std::accumulate(xs.begin(), xs.end(), 0.0);
  st.mean = sum / static_cast<double>(st.n);
  if (st.n < 2) return st;
  double ss = 0.0;
  for (double x : xs) {
    double d = x - st.mean;
    ss += d * d;
  }
  st.var = ss / static_cast<double>(st.n - 1);
  st.se = std::sqrt(st.var / static_cast<double>(st.n));
  return st;
}

double jackknife_se_variance(std::span<const double> xs) {
  const std::size_t n = xs.size();
  if (n < 3) return 0.0;
  const double nn = static_cast<double>(n);
  double sum = std::accumulate(xs.begin(), xs.end(), 0.0);
  double sumsq = 0.0;
  for (double x : xs) sumsq += x * x;
  // Leave-one-out variances in O(n) from the two power sums.
  std::vector<double> loo(n);
  for (std::size_t i = 0; i < n; ++i) {
    double s1 = sum - xs[i];
    double s2 = sumsq - xs[i] * xs[i];
    double m = s1 / (nn - 1.0);
    loo[i] = (s2 - (nn - 1.0) * m * m) / (nn - 2.0);
  }
  double mbar = std::accumulate(loo.begin(), loo.end(), 0.0) / nn;
  double ss = 0.0;
  for (double v : loo) {
    double d = v - mbar;
    ss += d * d;
  }
  return std::sqrt((nn - 1.0) / nn * ss);
}

double normal_cdf(double x) { return 0.5 * std::erfc(-x * 0.7071067811865475244); }

// Kolmogorov distribution survival function, with Stephens' small-sample
// correction applied by the callers.
static double kolmogorov_sf(double t) {
  if (t < 0.2) return 1.0;
  if (t > 8.0) return 0.0;
  double sum = 0.0;
  for (int k = 1; k <= 100; ++k) {
    double term = std::exp(-2.0 * k * k * t * t);
    sum += (k % 2 == 1 ? term : -term);
    if (term < 1e-16) break;
  }
  return std::clamp(2.0 * sum, 0.0, 1.0);
}

KsResult ks_test(std::span<const double> xs, const std::function<double(double)>& cdf) {
  if (xs.empty()) throw std::invalid_argument("ks_test: empty sample");
  std::vector<double> s(xs.begin(), xs.end());
  std::sort(s.begin(), s.end());
  const double n = static_cast<double>(s.size());
  double d = 0.0;
  for (std::size_t i = 0; i < s.size(); ++i) {
    double f = cdf(s[i]);
    d = std::max(d, std::fabs(f - static_cast<double>(i) / n));
    d = std::max(d, std::fabs(static_cast<double>(i + 1) / n - f));
  }
  double rn = std::sqrt(n);
  KsResult r;
  r.d = d;
  r.p = kolmogorov_sf((rn + 0.12 + 0.11 / rn) * d);
  return r;
}

KsResult ks_two_sample(std::span<const double> a, std::span<const double> b) {
  if (a.empty() || b.empty()) throw std::invalid_argument("ks_two_sample: empty sample");
  std::vector<double> sa(a.begin(), a.end()), sb(b.begin(), b.end());
  std::sort(sa.begin(), sa.end());
  std::sort(sb.begin(), sb.end());
  double d = 0.0;
  std::size_t i = 0, j = 0;
  const double na = static_cast<double>(sa.size()), nb = static_cast<double>(sb.size());
  while (i < sa.size() && j < sb.size()) {
    double x = std::min(sa[i], sb[j]);
    while (i < sa.size() && sa[i] <= x) ++i;
    while (j < sb.size() && sb[j] <= x) ++j;
    d = std::max(d, std::fabs(static_cast<double>(i) / na - static_cast<double>(j) / nb));
  }
  double ne = std::sqrt(na * nb / (na + nb));
  KsResult r;
  r.d = d;
  r.p = kolmogorov_sf((ne + 0.12 + 0.11 / ne) * d);
  return r;
}

static int mk_s_statistic(std::span<const double> xs) {
  int s = 0;
  for (std::size_t i = 0; i < xs.size(); ++i)
    for (std::size_t j = i + 1; j < xs.size(); ++j) {
      if (xs[j] > xs[i]) ++s;
      else if (xs[j] < xs[i]) --s;
    }
  return s;
}

MannKendall mann_kendall(std::span<const double> xs) {
  MannKendall mk;
  const std::size_t n = xs.size();
  if (n < 2) return mk;
  mk.s = mk_s_statistic(xs);
  if (n <= 8) {
    // Exact null law by enumerating rank permutations.
    std::vector<int> perm(n);
    std::iota(perm.begin(), perm.end(), 0);
    std::size_t total = 0, geq = 0;
    std::vector<double> v(n);
    do {
      for (std::size_t i = 0; i < n; ++i) v[i] = static_cast<double>(perm[i]);
      if (mk_s_statistic(v) >= mk.s) ++geq;
      ++total;
    } while (std::next_permutation(perm.begin(), perm.end()));
    mk.p_increasing = static_cast<double>(geq) / static_cast<double>(total);
    double var = n * (n - 1.0) * (2.0 * n + 5.0) / 18.0;
    mk.z = (mk.s == 0) ? 0.0 : (mk.s - (mk.s > 0 ? 1.0 : -1.0)) / std::sqrt(var);
  } else {
    double var = n * (n - 1.0) * (2.0 * n + 5.0) / 18.0;
    double z = 0.0;
    if (mk.s > 0) z = (mk.s - 1.0) / std::sqrt(var);
    else if (mk.s < 0) z = (mk.s + 1.0) / std::sqrt(var);
    mk.z = z;
    mk.p_increasing = 1.0 - normal_cdf(z);
  }
  return mk;
}

LinearFit linear_fit(std::span<const double> xs, std::span<const double> ys) {
  if (xs.size() != ys.size() || xs.size() < 2)
    throw std::invalid_argument("linear_fit: need two same-length samples");
  const double n = static_cast<double>(xs.size());
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    sx += xs[i];
    sy += ys[i];
    sxx += xs[i] * xs[i];
    sxy += xs[i] * ys[i];
  }
  double denom = n * sxx - sx * sx;
  if (denom == 0.0) throw std::invalid_argument("linear_fit: degenerate abscissae");
  LinearFit f;
  f.slope = (n * sxy - sx * sy) / denom;
  f.intercept = (sy - f.slope * sx) / n;
  return f;
}

TwoTermFit two_term_fit(std::span<const double> xs, std::span<const double> zs,
                        std::span<const double> ys) {
  if (xs.size() != ys.size() || zs.size() != ys.size() || ys.size() < 2)
    throw std::invalid_argument("two_term_fit: need three same-length samples");
  double xx = 0, xz = 0, zz = 0, xy = 0, zy = 0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    xx += xs[i] * xs[i];
    xz += xs[i] * zs[i];
    zz += zs[i] * zs[i];
    xy += xs[i] * ys[i];
    zy += zs[i] * ys[i];
  }
  double det = xx * zz - xz * xz;
  if (det == 0.0) throw std::invalid_argument("two_term_fit: collinear regressors");
  TwoTermFit f;
  f.a = (xy * zz - zy * xz) / det;
  f.b = (zy * xx - xy * xz) / det;
  return f;
}

double integrated_autocorr_time(std::span<const double> xs) {
  const std::size_t n = xs.size();
  if (n < 8) return 1.0;
  SampleStats st = sample_stats(xs);
  if (st.var == 0.0) return 1.0;
  std::vector<double> c(n / 2, 0.0);
  for (std::size_t lag = 0; lag < c.size(); ++lag) {
    double acc = 0.0;
    for (std::size_t i = 0; i + lag < n; ++i)
      acc += (xs[i] - st.mean) * (xs[i + lag] - st.mean);
    c[lag] = acc / static_cast<double>(n - lag);
  }
  // Self-consistent window: stop once the window exceeds 6*tau.
  double tau = 1.0;
  for (std::size_t lag = 1; lag < c.size(); ++lag) {
    tau += 2.0 * c[lag] / c[0];
    if (static_cast<double>(lag) >= 6.0 * tau) break;
    if (c[lag] <= 0.0) break;
  }
  return std::max(tau, 1.0);
}

}  // namespace rieszlab
