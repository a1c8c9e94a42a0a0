#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <vector>

#include "rieszlab/core.hpp"
#include "rieszlab/parallel.hpp"
#include "rieszlab/stats.hpp"

using namespace rieszlab;

TEST_CASE("window basics") {
  Window w = Window::centered(8.0);
  CHECK(w.left == -4.0);
  CHECK(w.right == 4.0);
  CHECK(w.length() == 8.0);
  CHECK(w.center() == 0.0);
  CHECK(w.contains(-4.0));
  CHECK(!w.contains(4.0));  // half open
  CHECK_THROWS_AS(Window(1.0, 1.0), std::invalid_argument);
}

TEST_CASE("configuration merges duplicate atoms") {
  std::vector<Atom> atoms = {{1.0, 2}, {1.0 + 1e-13, 1}, {3.0, 1}};
  Configuration cfg(atoms, Window(0.0, 10.0));
  CHECK(cfg.atoms().size() == 2);
  CHECK(cfg.atoms()[0].mult == 3);
  CHECK(cfg.total_mass() == 4.0);
  CHECK(cfg.has_multiplicity());

  std::vector<double> xs = cfg.expanded();
  CHECK(xs.size() == 4);
  CHECK(std::is_sorted(xs.begin(), xs.end()));
}

TEST_CASE("count respects half-open windows") {
  Configuration cfg = Configuration::from_positions(
      std::vector<double>{0.0, 1.0, 2.0, 2.5}, Window(0.0, 10.0));
  CHECK(count(cfg, Window(0.0, 2.0)) == 2);
  CHECK(count(cfg, Window(0.0, 2.5)) == 3);
  CHECK(count(cfg, Window(2.5, 3.0)) == 1);
}

TEST_CASE("translate moves atoms and window together") {
  Configuration cfg = Configuration::from_positions(
      std::vector<double>{-1.0, 1.0}, Window::centered(4.0));
  Configuration moved = translate(cfg, 3.0);
  CHECK(moved.atoms()[0].pos == 2.0);
  CHECK(moved.window()->left == 1.0);
  CHECK(moved.window()->right == 5.0);
}

TEST_CASE("restrict_to keeps only interior atoms") {
  Configuration cfg = Configuration::from_positions(
      std::vector<double>{-3.0, -1.0, 0.0, 1.0, 3.0}, Window::centered(8.0));
  Configuration inside = restrict_to(cfg, Window::centered(2.0));
  CHECK(inside.total_mass() == 2.0);  // -1 and 0
  CHECK(inside.window()->length() == 2.0);
}

TEST_CASE("model params validation") {
  CHECK_THROWS_AS(ModelParams(0.5, 1.0, 4), std::invalid_argument);
  CHECK_THROWS_AS(ModelParams(-2.0, 1.0, 4), std::invalid_argument);
  CHECK_THROWS_AS(ModelParams(-1.0, -0.5, 4), std::invalid_argument);
  CHECK_THROWS_AS(ModelParams(-1.0, 1.0, -1), std::invalid_argument);
  ModelParams free_case(-1.0, 0.0, 1);  // beta = 0 is a valid (free) system
  CHECK(free_case.beta == 0.0);
  ModelParams p(-1.0, 2.0, 6);
  CHECK(p.box().left == -3.0);
  CHECK(p.box().right == 3.0);
}

TEST_CASE("random stream reproducibility") {
  RandomStream a(123), b(123), c(124);
  for (int i = 0; i < 100; ++i) {
    CHECK(a.next_u64() == b.next_u64());
  }
  bool any_diff = false;
  RandomStream a2(123);
  for (int i = 0; i < 100; ++i) any_diff = any_diff || (a2.next_u64() != c.next_u64());
  CHECK(any_diff);
}

TEST_CASE("substreams are independent of consumption order") {
  RandomStream root(99);
  RandomStream s0 = root.substream(0);
  double first_before = s0.uniform();

  RandomStream root2(99);
  RandomStream other = root2.substream(5);
  for (int i = 0; i < 17; ++i) other.uniform();  // consume a sibling heavily
  RandomStream s0_again = root2.substream(0);
  CHECK(first_before == s0_again.uniform());
}

TEST_CASE("uniform and gaussian moments") {
  RandomStream rs(7);
  const int n = 200000;
  double su = 0.0, sg = 0.0, sg2 = 0.0;
  for (int i = 0; i < n; ++i) {
    su += rs.uniform();
    double g = rs.gaussian();
    sg += g;
    sg2 += g * g;
  }
  CHECK(std::fabs(su / n - 0.5) < 0.005);
  CHECK(std::fabs(sg / n) < 0.01);
  CHECK(std::fabs(sg2 / n - 1.0) < 0.02);
}

TEST_CASE("poisson draw matches mean and variance") {
  RandomStream rs(11);
  const int n = 50000;
  double mean = 20.0;
  double s1 = 0.0, s2 = 0.0;
  for (int i = 0; i < n; ++i) {
    double k = static_cast<double>(rs.poisson(mean));
    s1 += k;
    s2 += k * k;
  }
  double m = s1 / n;
  double v = s2 / n - m * m;
  CHECK(std::fabs(m - mean) < 0.1);
  CHECK(std::fabs(v - mean) < 0.5);
}

TEST_CASE("chunked_sum serial and parallel agree bitwise") {
  RandomStream rs(3);
  std::vector<double> vals(100001);
  for (auto& v : vals) v = rs.uniform(-1.0, 1.0) * std::exp(10.0 * rs.uniform());
  auto f = [&](std::size_t i) { return vals[i]; };
  double s = chunked_sum(vals.size(), Exec::serial, f);
  double p = chunked_sum(vals.size(), Exec::parallel, f);
  CHECK(s == p);
}

TEST_CASE("indexed_map preserves index order") {
  auto out = indexed_map<double>(1000, Exec::parallel,
                                 [](std::size_t i) { return static_cast<double>(i * i); });
  for (std::size_t i = 0; i < out.size(); ++i)
    CHECK(out[i] == static_cast<double>(i * i));
}

TEST_CASE("sample stats on a known set") {
  std::vector<double> xs = {1.0, 2.0, 3.0, 4.0};
  SampleStats st = sample_stats(xs);
  CHECK(st.mean == doctest::Approx(2.5));
  CHECK(st.var == doctest::Approx(5.0 / 3.0));
  CHECK(st.se == doctest::Approx(std::sqrt(5.0 / 3.0 / 4.0)));
}

TEST_CASE("ks test calibration against the uniform law") {
  RandomStream rs(17);
  std::vector<double> xs(2000);
  for (auto& x : xs) x = rs.uniform();
  KsResult r = ks_test(xs, [](double x) { return std::clamp(x, 0.0, 1.0); });
  CHECK(r.p > 0.01);

  for (auto& x : xs) x = x * x;  // clearly not uniform
  KsResult bad = ks_test(xs, [](double x) { return std::clamp(x, 0.0, 1.0); });
  CHECK(bad.p < 1e-6);
}

TEST_CASE("two sample ks separates different laws") {
  RandomStream rs(19);
  std::vector<double> a(3000), b(3000), c(3000);
  for (auto& x : a) x = rs.gaussian();
  for (auto& x : b) x = rs.gaussian();
  for (auto& x : c) x = rs.gaussian() + 0.25;
  CHECK(ks_two_sample(a, b).p > 0.01);
  CHECK(ks_two_sample(a, c).p < 1e-6);
}

TEST_CASE("mann kendall detects monotone trends") {
  std::vector<double> up = {1.0, 2.0, 3.0, 4.0, 5.0, 6.0, 7.0, 8.0};
  MannKendall mk = mann_kendall(up);
  CHECK(mk.increasing_at(0.05));
  std::vector<double> flat = {1.0, 0.9, 1.1, 1.0, 0.95, 1.05, 1.0, 0.98};
  CHECK(!mann_kendall(flat).increasing_at(0.05));
}

TEST_CASE("linear and two-term fits recover exact coefficients") {
  std::vector<double> xs, zs, ys, ys2;
  for (int i = 1; i <= 20; ++i) {
    double x = i;
    double z = std::sqrt(static_cast<double>(i));
    xs.push_back(x);
    zs.push_back(z);
    ys.push_back(3.0 * x - 2.0);
    ys2.push_back(1.5 * x + 0.25 * z);
  }
  LinearFit lf = linear_fit(xs, ys);
  CHECK(lf.slope == doctest::Approx(3.0));
  CHECK(lf.intercept == doctest::Approx(-2.0));
  TwoTermFit tf = two_term_fit(xs, zs, ys2);
  CHECK(tf.a == doctest::Approx(1.5));
  CHECK(tf.b == doctest::Approx(0.25));
}

TEST_CASE("autocorrelation time is about one for iid data") {
  RandomStream rs(23);
  std::vector<double> xs(5000);
  for (auto& x : xs) x = rs.gaussian();
  double tau = integrated_autocorr_time(xs);
  CHECK(tau > 0.5);
  CHECK(tau < 1.5);
}
