#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <vector>

#include "rieszlab/generators.hpp"
#include "rieszlab/rigidity.hpp"

using namespace rieszlab;

namespace {

double circle_dist(double a, double b) {
  double d = std::fabs(a - b);
  d -= std::floor(d);
  return std::min(d, 1.0 - d);
}

std::vector<Configuration> lattice_batch(int count, Window w, std::uint64_t seed) {
  RandomStream rs(seed);
  std::vector<Configuration> out;
  out.reserve(static_cast<std::size_t>(count));
  for (int i = 0; i < count; ++i) {
    RandomStream sub = rs.substream(static_cast<std::uint64_t>(i));
    out.push_back(sample_stationarized_lattice(w, sub));
  }
  return out;
}

}  // namespace

TEST_CASE("lattice count variance follows the sawtooth") {
  auto samples = lattice_batch(1000, Window(-20.0, 20.0), 701);
  std::vector<double> lengths = {3.5, 7.3, 12.0};
  auto curve = variance_curve(samples, lengths);
  REQUIRE(curve.size() == 3);
  for (const auto& pt : curve) {
    const double f = pt.length - std::floor(pt.length);
    const double oracle = f * (1.0 - f);
    CHECK(std::fabs(pt.value - oracle) <= 4.0 * pt.stderr_ + 1e-9);
    CHECK(pt.samples == 1000);
  }
}

TEST_CASE("lattice discrepancy follows the sawtooth") {
  auto samples = lattice_batch(1000, Window(-20.0, 20.0), 702);
  std::vector<double> lengths = {3.5, 7.3};
  auto curve = discrepancy_stats(samples, lengths);
  REQUIRE(curve.size() == 2);
  for (const auto& pt : curve) {
    const double f = pt.length - std::floor(pt.length);
    const double oracle = 2.0 * f * (1.0 - f);
    CHECK(std::fabs(pt.value - oracle) <= 4.0 * pt.stderr_ + 1e-9);
  }
}

TEST_CASE("shift estimator reads the lattice phase exactly") {
  RandomStream rs(703);
  for (int rep = 0; rep < 25; ++rep) {
    RandomStream sub = rs.substream(static_cast<std::uint64_t>(rep));
    Configuration lat = sample_stationarized_lattice(Window(0.0, 100.0), sub);
    const double phase =
        lat.atoms()[0].pos - std::floor(lat.atoms()[0].pos);
    ShiftReport rep_mid = shift_estimator(lat, 50.0, 20);
    CHECK(circle_dist(rep_mid.u, phase) < 1e-9);
    CHECK(rep_mid.lr_gap < 1e-9);
    CHECK(rep_mid.depth_residual < 1e-9);
    CHECK(rep_mid.m == 20);

    // Translating the field moves the phase with it.
    for (double v : {0.1, 0.7, 2.3}) {
      ShiftReport moved = shift_estimator(translate(lat, v), 50.0, 20);
      CHECK(circle_dist(moved.u, rep_mid.u + v) < 1e-9);
    }
  }
}

TEST_CASE("shift estimator edge cases") {
  RandomStream rs(704);
  Configuration lat = sample_stationarized_lattice(Window(0.0, 100.0), rs);
  // Origin at the left edge leaves no left-side data.
  ShiftReport rep = shift_estimator(lat, 0.0, 10);
  CHECK(std::isnan(rep.lr_gap));
  CHECK_THROWS_AS(shift_estimator(lat, 50.0, 0), std::invalid_argument);
  CHECK_THROWS_AS(shift_estimator(lat, 95.0, 20), std::invalid_argument);
}

TEST_CASE("uniformity test calibration") {
  RandomStream rs(705);
  std::vector<double> uniform_vals;
  for (int i = 0; i < 200; ++i) uniform_vals.push_back(rs.uniform());
  UniformityReport ur = uniformity_test(uniform_vals);
  CHECK(ur.pass(0.01));
  CHECK(ur.n == 200);

  std::vector<double> stuck(200, 0.3);
  UniformityReport bad = uniformity_test(stuck);
  CHECK_FALSE(bad.pass(0.01));
  CHECK(bad.fourier_amp[0] == doctest::Approx(1.0));

  std::vector<double> few(49, 0.5);
  CHECK_THROWS_AS(uniformity_test(few), std::invalid_argument);
}

TEST_CASE("exterior view splits atoms and never reads the interior") {
  std::vector<double> xs = {-3.2, -1.0, 0.5, 2.0, 5.0, 7.5, 7.5};
  Configuration cfg = Configuration::from_positions(xs, Window(-5.0, 10.0));
  ExteriorView view(cfg, Window(0.0, 5.0));
  // The right endpoint itself is exterior under the half-open convention.
  REQUIRE(view.right_ascending().size() == 3);
  CHECK(view.right_ascending()[0] == 5.0);
  CHECK(view.right_ascending()[1] == 7.5);
  CHECK(view.right_ascending()[2] == 7.5);
  REQUIRE(view.left_descending().size() == 2);
  CHECK(view.left_descending()[0] == -1.0);
  CHECK(view.left_descending()[1] == -3.2);
}

TEST_CASE("exterior predictor recovers the hand-counted interior") {
  std::vector<double> xs;
  for (int j = -10; j <= 15; ++j) xs.push_back(j + 0.3);
  Configuration cfg = Configuration::from_positions(xs, Window(-10.0, 16.0));
  Window domain(0.5, 5.5);
  RigidityReport rep = exterior_count_predictor(cfg, domain, 3);
  CHECK(rep.actual == 5);
  CHECK(rep.predicted == 5);
  CHECK(rep.agree());
  CHECK(rep.s_right == doctest::Approx(6.3).epsilon(1e-12));
  CHECK(rep.s_left == doctest::Approx(0.3).epsilon(1e-12));
  CHECK(rep.res_right < 1e-9);
  CHECK(rep.res_left < 1e-9);
  CHECK_FALSE(rep.tie_flag);

  // The two entry points agree field by field.
  ExteriorView view(cfg, domain);
  RigidityReport rep2 = exterior_count_predictor(view, 3, count(cfg, domain));
  CHECK(rep2.predicted == rep.predicted);
  CHECK(rep2.actual == rep.actual);
  CHECK(rep2.s_right == rep.s_right);
  CHECK(rep2.s_left == rep.s_left);
}

TEST_CASE("exterior predictor is exact on shifted lattices") {
  RandomStream rs(706);
  Window domain(0.5, 5.5);
  for (int rep = 0; rep < 100; ++rep) {
    RandomStream sub = rs.substream(static_cast<std::uint64_t>(rep));
    Configuration lat = sample_stationarized_lattice(Window(-30.0, 30.0), sub);
    RigidityReport r = exterior_count_predictor(lat, domain, 8);
    CHECK(r.agree());
  }
}

TEST_CASE("exterior predictor validates depth") {
  std::vector<double> xs;
  for (int j = 0; j < 10; ++j) xs.push_back(j + 0.5);
  Configuration cfg = Configuration::from_positions(xs, Window(0.0, 10.0));
  CHECK_THROWS_AS(exterior_count_predictor(cfg, Window(4.0, 6.0), 0),
                  std::invalid_argument);
  CHECK_THROWS_AS(exterior_count_predictor(cfg, Window(4.0, 6.0), 10),
                  std::invalid_argument);
}
