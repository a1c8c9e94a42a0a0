#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <limits>
#include <numeric>
#include <optional>
#include <stdexcept>
#include <vector>

#include "rieszlab/generators.hpp"
#include "rieszlab/stats.hpp"
#include "rieszlab/transport.hpp"

using namespace rieszlab;

namespace {

// Simpson on [lo, hi] with an even panel count.
double simpson(const std::function<double(double)>& f, double lo, double hi,
               int panels) {
  const double h = (hi - lo) / panels;
  double acc = f(lo) + f(hi);
  for (int k = 1; k < panels; ++k) acc += f(lo + k * h) * (k % 2 ? 4.0 : 2.0);
  return acc * h / 3.0;
}

Configuration midpoint_config(std::int64_t j_lo, std::int64_t j_hi,
                              std::optional<Window> w) {
  std::vector<double> xs;
  for (std::int64_t j = j_lo; j <= j_hi; ++j)
    xs.push_back(static_cast<double>(j) + 0.5);
  return Configuration::from_positions(xs, w);
}

}  // namespace

TEST_CASE("unit block cost closed forms") {
  // Atom at the block midpoint.
  CHECK(unit_block_cost(0.5, 0.0, 2.0) == doctest::Approx(1.0 / 12.0).epsilon(1e-14));
  CHECK(unit_block_cost(0.5, 0.0, 1.0) == doctest::Approx(0.25).epsilon(1e-14));
  CHECK(unit_block_cost(0.5, 0.0, 3.0) == doctest::Approx(1.0 / 32.0).epsilon(1e-14));
  CHECK(unit_block_cost(3.8, 3.3, 2.0) ==
        doctest::Approx(unit_block_cost(0.5, 0.0, 2.0)).epsilon(1e-13));

  // Random offsets against quadrature, splitting at the kink when inside.
  RandomStream rs(601);
  for (int rep = 0; rep < 30; ++rep) {
    const double l = rs.uniform(-5.0, 5.0);
    const double a = l + rs.uniform(-2.0, 3.0);
    const double p = 1.0 + 2.5 * rs.uniform();
    auto f = [&](double t) { return std::pow(std::fabs(a - (l + t)), p); };
    const double c = a - l;
    double ref;
    if (c > 0.0 && c < 1.0)
      ref = simpson(f, 0.0, c, 2000) + simpson(f, c, 1.0, 2000);
    else
      ref = simpson(f, 0.0, 1.0, 2000);
    CHECK(unit_block_cost(a, l, p) == doctest::Approx(ref).epsilon(1e-7));
  }
}

TEST_CASE("monotone matching pairs sorted orders and reports cost") {
  std::vector<double> sources = {3.0, 1.0, 2.0};
  std::vector<double> targets = {0.5, 2.5, 1.5};
  Matching m = monotone_match_points(sources, targets, 2.0);
  REQUIRE(m.pairs.size() == 3);
  CHECK(m.well_ordered());
  CHECK(m.pairs[0].source == 1.0);
  CHECK(m.pairs[0].target == 0.5);
  CHECK(m.pairs[2].source == 3.0);
  CHECK(m.pairs[2].target == 2.5);
  CHECK(m.cost == doctest::Approx(3 * 0.25).epsilon(1e-14));

  std::vector<double> short_list = {1.0};
  CHECK_THROWS_AS(monotone_match_points(sources, short_list, 2.0),
                  std::invalid_argument);
  CHECK_THROWS_AS(monotone_match_points(sources, targets, 0.5),
                  std::invalid_argument);
}

TEST_CASE("monotone matching beats every other permutation") {
  RandomStream rs(602);
  for (int rep = 0; rep < 20; ++rep) {
    const double p = rep % 2 ? 1.0 : 2.0;
    std::vector<double> src(4), tgt(4);
    for (auto& v : src) v = rs.uniform(0.0, 10.0);
    for (auto& v : tgt) v = rs.uniform(0.0, 10.0);
    Matching m = monotone_match_points(src, tgt, p);

    std::vector<double> s_sorted = src, t_sorted = tgt;
    std::sort(s_sorted.begin(), s_sorted.end());
    std::sort(t_sorted.begin(), t_sorted.end());
    std::vector<int> perm(4);
    std::iota(perm.begin(), perm.end(), 0);
    double best = std::numeric_limits<double>::infinity();
    do {
      double c = 0.0;
      for (int i = 0; i < 4; ++i)
        c += std::pow(std::fabs(s_sorted[static_cast<std::size_t>(i)] -
                                t_sorted[static_cast<std::size_t>(perm[static_cast<std::size_t>(i)])]),
                      p);
      best = std::min(best, c);
    } while (std::next_permutation(perm.begin(), perm.end()));
    CHECK(m.cost <= best * (1.0 + 1e-12) + 1e-12);
    CHECK(m.cost >= best * (1.0 - 1e-12) - 1e-12);
  }
}

TEST_CASE("block transport of the midpoint configuration") {
  const std::int64_t n = 7;
  Window w(0.0, static_cast<double>(n));
  Configuration cfg = midpoint_config(0, n - 1, w);
  TransportReport rep = monotone_cost_to_lebesgue(cfg, w, 2.0);
  CHECK(rep.total_cost == doctest::Approx(n / 12.0).epsilon(1e-13));
  CHECK(rep.cost_per_length == doctest::Approx(1.0 / 12.0).epsilon(1e-13));
  CHECK(rep.window_length == doctest::Approx(7.0));
  CHECK(rep.p == 2.0);

  // Mass must match the window length.
  Configuration sparse = midpoint_config(0, n - 2, w);
  CHECK_THROWS_AS(monotone_cost_to_lebesgue(sparse, w, 2.0),
                  std::invalid_argument);
  CHECK_THROWS_AS(monotone_cost_to_lebesgue(cfg, w, 0.3), std::invalid_argument);
}

TEST_CASE("windowed cost against both targets") {
  Window big(-10.0, 10.0);
  Configuration cfg = midpoint_config(-10, 9, big);
  // Atoms sit exactly on the cell midpoints of any integer-aligned window.
  CHECK(windowed_cost(cfg, Window(-3.0, 3.0), TransportTarget::lattice, 2.0) ==
        doctest::Approx(0.0));
  CHECK(windowed_cost(cfg, Window(-3.0, 3.0), TransportTarget::lebesgue, 2.0) ==
        doctest::Approx(6.0 / 12.0).epsilon(1e-13));

  // Trimming: two surplus edge atoms drop symmetrically, leaving midpoints.
  Configuration crowded = Configuration::from_positions(
      std::vector<double>{-2.9, -2.5, -1.5, -0.5, 0.5, 1.5, 2.5, 2.9},
      Window(-3.0, 3.0));
  CHECK(windowed_cost(crowded, Window(-3.0, 3.0), TransportTarget::lattice, 2.0) ==
        doctest::Approx(0.0));
  // Empty restriction costs nothing.
  Configuration far = midpoint_config(20, 25, std::nullopt);
  CHECK(windowed_cost(far, Window(-3.0, 3.0), TransportTarget::lebesgue, 2.0) ==
        0.0);
}

TEST_CASE("stationary cost of the shifted lattice") {
  auto sampler = [](RandomStream& rs) {
    return sample_stationarized_lattice(Window::centered(60.0), rs);
  };
  std::vector<double> lengths = {10.0, 20.0};
  RandomStream rs(603);
  auto leb = stationary_cost_estimator(sampler, TransportTarget::lebesgue, 2.0,
                                       lengths, 400, rs);
  REQUIRE(leb.size() == 2);
  for (const auto& pt : leb) {
    CHECK(pt.samples == 400);
    // The free grid phase centers every block on its atom: exactly 1/12 per
    // unit length, with no sample-to-sample spread.
    CHECK(pt.mean_cost_per_length == doctest::Approx(1.0 / 12.0).epsilon(1e-12));
    CHECK(pt.stderr_ < 1e-12);
  }
  RandomStream rs2(604);
  auto lat = stationary_cost_estimator(sampler, TransportTarget::lattice, 2.0,
                                       lengths, 400, rs2);
  for (const auto& pt : lat) {
    // A shifted lattice matched to the best-phase lattice costs nothing.
    CHECK(pt.mean_cost_per_length < 1e-12);
  }

  // The window-pinned variant pays the extra phase term on top: U offsets
  // every block, (U^3 + (1-U)^3)/3 per block, mean 1/6 vs lebesgue.
  RandomStream rs3(607);
  std::vector<double> vals;
  for (int rep = 0; rep < 400; ++rep) {
    RandomStream sub = rs3.substream(static_cast<std::uint64_t>(rep));
    Configuration cfg = sampler(sub);
    vals.push_back(
        windowed_cost(cfg, Window::centered(20.0), TransportTarget::lebesgue,
                      2.0, PhaseAnchor::window) /
        20.0);
  }
  SampleStats st = sample_stats(vals);
  CHECK(std::fabs(st.mean - 1.0 / 6.0) < 4.0 * st.se);
}

TEST_CASE("tiled bound for the deterministic midpoint tile") {
  auto tile = [](RandomStream&) {
    return midpoint_config(-4, 3, Window::centered(8.0));
  };
  RandomStream rs(605);
  CostBound bound = tiled_cost_bound(tile, 2.0, 50, rs);
  CHECK(bound.value == doctest::Approx(1.0 / 12.0).epsilon(1e-13));
  CHECK(bound.stderr_ == doctest::Approx(0.0));
  CHECK(bound.samples == 50);

  auto windowless = [](RandomStream&) {
    return Configuration::from_positions(std::vector<double>{0.5}, std::nullopt);
  };
  RandomStream rs2(606);
  CHECK_THROWS_AS(tiled_cost_bound(windowless, 2.0, 4, rs2),
                  std::invalid_argument);
}
