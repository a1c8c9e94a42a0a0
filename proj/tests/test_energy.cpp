#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <functional>
#include <vector>

#include "rieszlab/energy.hpp"
#include "rieszlab/generators.hpp"
#include "rieszlab/kernels.hpp"
#include "rieszlab/oscint.hpp"
#include "rieszlab/sampler.hpp"

using namespace rieszlab;

namespace {

// Composite Simpson, fine enough for 1e-10 on the smooth integrands here.
double simpson(const std::function<double(double)>& f, double a, double b, int n) {
  if (n % 2 != 0) ++n;
  double h = (b - a) / n;
  double s = f(a) + f(b);
  for (int i = 1; i < n; ++i) s += f(a + i * h) * (i % 2 == 1 ? 4.0 : 2.0);
  return s * h / 3.0;
}

Configuration uniform_config(int n, const Window& w, RandomStream& rs) {
  std::vector<double> xs(static_cast<std::size_t>(n));
  for (auto& x : xs) x = rs.uniform(w.left, w.right);
  return Configuration::from_positions(xs, w);
}

}  // namespace

TEST_CASE("riesz fourier constant oracles") {
  CHECK(riesz_fourier_constant(-1.0) == doctest::Approx(2.0).epsilon(1e-13));
  CHECK(riesz_fourier_constant(-0.5) ==
        doctest::Approx(std::sqrt(M_PI / 2.0)).epsilon(1e-13));
  CHECK(riesz_fourier_constant(-1.5) ==
        doctest::Approx(0.75 * std::sqrt(2.0 * M_PI)).epsilon(1e-13));
  CHECK_THROWS_AS(riesz_fourier_constant(0.5), std::domain_error);
  CHECK_THROWS_AS(riesz_fourier_constant(-2.0), std::domain_error);
}

TEST_CASE("mean cell energy closed form") {
  CHECK(cell_mean_energy(-1.0) == doctest::Approx(1.0 / 6.0).epsilon(1e-13));
  // Direct double integral of -|x-y|^{-s} etc over the unit cell pair term:
  // (1/2) iint |x-y| dx dy on [0,1]^2 is 1/6; the general form must match a
  // brute 2d Simpson at another s.
  double s = -1.5;
  int n = 400;
  double acc = 0.0;
  for (int i = 0; i < n; ++i) {
    double x = (i + 0.5) / n;
    for (int j = 0; j < n; ++j) {
      double y = (j + 0.5) / n;
      acc += std::pow(std::fabs(x - y), -s);
    }
  }
  acc /= 2.0 * n * n;
  CHECK(cell_mean_energy(s) == doctest::Approx(acc).epsilon(1e-3));
}

TEST_CASE("kernel point values and transforms") {
  Kernel riesz = Kernel::riesz(-1.0);
  CHECK(riesz.value_at(0.0) == 0.0);
  CHECK(riesz.value_at(2.0) == doctest::Approx(-2.0));
  CHECK(riesz.fourier_at(3.0) == doctest::Approx(2.0 / 9.0));  // C_s |xi|^{s-1}

  Kernel expk = Kernel::exponential();
  CHECK(expk.value_at(0.0) == 1.0);
  CHECK(expk.value_at(-2.0) == doctest::Approx(std::exp(-2.0)));
  CHECK(expk.fourier_at(1.5) == doctest::Approx(2.0 / (1.0 + 2.25)));

  Kernel gauss = Kernel::gaussian();
  CHECK(gauss.value_at(1.0) == doctest::Approx(std::exp(-0.5)));
  CHECK(gauss.fourier_at(0.5) ==
        doctest::Approx(std::sqrt(2.0 * M_PI) * std::exp(-0.125)));
}

TEST_CASE("kernel backgrounds match brute quadrature") {
  Window w(-3.0, 5.0);
  RandomStream rs(5);
  for (const Kernel& k :
       {Kernel::riesz(-0.7), Kernel::riesz(-1.3), Kernel::exponential(),
        Kernel::gaussian()}) {
    for (int rep = 0; rep < 5; ++rep) {
      double x = rs.uniform(w.left, w.right);
      double closed = k.background(x, w);
      double brute = simpson([&](double y) { return k.value_at(x - y); }, w.left,
                             w.right, 20000);
      CHECK(closed == doctest::Approx(brute).epsilon(1e-6));
    }
    double closed2 = k.background_double_integral(w);
    double brute2 = simpson(
        [&](double x) {
          return simpson([&](double y) { return k.value_at(x - y); }, w.left,
                         w.right, 2000);
        },
        w.left, w.right, 2000);
    CHECK(closed2 == doctest::Approx(brute2).epsilon(1e-5));
  }
}

TEST_CASE("single atom exponential energy closed form") {
  // 1/2 g(0) - B(0) + 1/2 iint over the unit window: each piece is elementary.
  Window w = Window::centered(1.0);
  Configuration cfg = Configuration::from_positions(std::vector<double>{0.0}, w);
  EnergyValue e = kernel_energy(cfg, w, Kernel::exponential());
  double want = 0.5 - 2.0 * (1.0 - std::exp(-0.5)) + std::exp(-1.0);
  CHECK(e.value == doctest::Approx(want).epsilon(1e-12));
  CHECK(want == doctest::Approx(0.080940760597).epsilon(1e-9));

  EnergyValue ef = kernel_energy_fourier(cfg, w, Kernel::exponential());
  CHECK(ef.value == doctest::Approx(want).epsilon(1e-7));
}

TEST_CASE("closed form vs spectral energy for short range kernels") {
  RandomStream rs(31);
  Window w = Window::centered(12.0);
  for (int rep = 0; rep < 4; ++rep) {
    Configuration cfg = uniform_config(12, w, rs);
    for (const Kernel& k : {Kernel::exponential(), Kernel::gaussian()}) {
      EnergyValue direct = kernel_energy(cfg, w, k);
      EnergyValue spectral = kernel_energy_fourier(cfg, w, k);
      CHECK(std::fabs(direct.value - spectral.value) <=
            spectral.err + 1e-8 + 1e-12 * std::fabs(direct.value));
    }
  }
}

TEST_CASE("hand values through every evaluator") {
  ModelParams p1(-1.0, 1.0, 1);
  Configuration c1 =
      Configuration::from_positions(std::vector<double>{0.0}, p1.box());
  CHECK(hamiltonian_pairwise(c1, p1) == doctest::Approx(1.0 / 12.0).epsilon(1e-13));
  CHECK(hamiltonian_baxter(c1, p1) == doctest::Approx(1.0 / 12.0).epsilon(1e-13));
  EnergyValue f1 = hamiltonian_fourier(c1, p1);
  CHECK(f1.value == doctest::Approx(1.0 / 12.0).epsilon(1e-7));

  ModelParams p2(-1.0, 1.0, 2);
  Configuration c2 =
      Configuration::from_positions(std::vector<double>{-0.5, 0.5}, p2.box());
  CHECK(hamiltonian_pairwise(c2, p2) == doctest::Approx(1.0 / 6.0).epsilon(1e-13));
  CHECK(hamiltonian_baxter(c2, p2) == doctest::Approx(1.0 / 6.0).epsilon(1e-13));
  EnergyValue f2 = hamiltonian_fourier(c2, p2);
  CHECK(f2.value == doctest::Approx(1.0 / 6.0).epsilon(1e-7));
}

TEST_CASE("three evaluators agree on random configurations") {
  RandomStream rs(41);
  for (int rep = 0; rep < 10; ++rep) {
    int n = 1 + static_cast<int>(rs.uniform_index(30));
    ModelParams p(-1.0, 1.0, n);
    Configuration cfg = uniform_config(n, p.box(), rs);
    double hb = hamiltonian_baxter(cfg, p);
    double hp = hamiltonian_pairwise(cfg, p);
    EnergyValue hf = hamiltonian_fourier(cfg, p);
    CHECK(std::fabs(hp - hb) < 1e-10 * std::fabs(hb));
    CHECK(std::fabs(hf.value - hb) < 1e-6 * std::fabs(hb));
  }
}

TEST_CASE("pairwise energy is reflection symmetric") {
  RandomStream rs(43);
  int n = 14;
  ModelParams p(-1.3, 1.0, n);
  Configuration cfg = uniform_config(n, p.box(), rs);
  std::vector<double> mirrored;
  for (const auto& a : cfg.atoms()) mirrored.push_back(-a.pos);
  // The box is half open so the exact mirror of an interior point can land on
  // the right edge; nudge inside.
  for (auto& x : mirrored) x = std::min(x, p.box().right - 1e-9);
  Configuration ref = Configuration::from_positions(mirrored, p.box());
  double h1 = hamiltonian_pairwise(cfg, p);
  double h2 = hamiltonian_pairwise(ref, p);
  CHECK(h1 == doctest::Approx(h2).epsilon(1e-7));
}

TEST_CASE("multiplicity atoms are handled by both sides") {
  ModelParams p(-1.0, 1.0, 4);
  std::vector<Atom> atoms = {{-1.0, 2}, {0.5, 1}, {1.2, 1}};
  Configuration cfg(atoms, p.box());
  double hp = hamiltonian_pairwise(cfg, p);
  double hb = hamiltonian_baxter(cfg, p);
  EnergyValue hf = hamiltonian_fourier(cfg, p);
  CHECK(hp == doctest::Approx(hb).epsilon(1e-11));
  CHECK(hf.value == doctest::Approx(hb).epsilon(1e-6));
}

TEST_CASE("energy evaluator preconditions") {
  ModelParams p(-1.0, 1.0, 4);
  Configuration outside =
      Configuration::from_positions(std::vector<double>{0.0, 5.0}, Window(-8.0, 8.0));
  CHECK_THROWS_AS(hamiltonian_pairwise(outside, p), std::invalid_argument);
  CHECK_THROWS_AS(hamiltonian_baxter(outside, p), std::invalid_argument);

  Configuration three =
      Configuration::from_positions(std::vector<double>{-1.0, 0.0, 1.0}, p.box());
  std::vector<std::string> warnings;
  hamiltonian_pairwise(three, p, Exec::serial, &warnings);
  CHECK(!warnings.empty());  // mass 3 against n = 4
  CHECK_THROWS_AS(hamiltonian_fourier(three, p), std::domain_error);

  ModelParams p_half(-0.5, 1.0, 2);
  Configuration ok =
      Configuration::from_positions(std::vector<double>{-0.3, 0.4}, p_half.box());
  CHECK_THROWS_AS(hamiltonian_baxter(ok, p_half), std::invalid_argument);
}

TEST_CASE("oscillatory power tails match closed forms at small cutoffs") {
  // int_0^inf (cos(u) - 1) u^-q du = Gamma(1-q) sin(pi q / 2) for 1 < q < 3,
  // so the tail from w is that constant plus w^{1-q}/(q-1) minus the head
  // integral of (cos(u) - 1) u^-q, summed from the cosine series.
  double q = 1.5;
  double w = 0.5;
  double head = 0.0;
  double fact = 1.0;  // (2k)!
  for (int k = 1; k <= 8; ++k) {
    fact *= (2.0 * k - 1.0) * (2.0 * k);
    double e = 2.0 * k + 1.0 - q;
    head += ((k % 2 == 0) ? 1.0 : -1.0) * std::pow(w, e) / (fact * e);
  }
  double expected = std::tgamma(1.0 - q) * std::sin(M_PI * q / 2.0) +
                    std::pow(w, 1.0 - q) / (q - 1.0) - head;
  CHECK(cos_power_tail(q, w).value == doctest::Approx(expected).epsilon(1e-10));

  // int_0^inf sin(u) u^-q du = Gamma(1-q) cos(pi q / 2) for 0 < q < 2.
  double qs = 1.5;
  double ws = 1e-6;
  double fulls = std::tgamma(1.0 - qs) * std::cos(M_PI * qs / 2.0);
  double heads = std::pow(ws, 2.0 - qs) / (2.0 - qs);  // sin(u) ~ u below ws
  CHECK(sin_power_tail(qs, ws).value == doctest::Approx(fulls - heads).epsilon(1e-9));
}

TEST_CASE("oscillatory power tails are consistent across regimes") {
  for (double q : {1.3, 2.0, 2.7}) {
    for (auto [w1, w2] : std::vector<std::pair<double, double>>{
             {0.5, 20.0}, {20.0, 60.0}, {0.7, 55.0}}) {
      QuadOutcome seg = integrate_gk([&](double u) { return std::cos(u) * std::pow(u, -q); },
                                     w1, w2, 1e-13, 0.5, 100000, Exec::serial);
      double lhs = cos_power_tail(q, w1).value;
      double rhs = cos_power_tail(q, w2).value + seg.value;
      CHECK(lhs == doctest::Approx(rhs).epsilon(1e-9));
      QuadOutcome segs = integrate_gk([&](double u) { return std::sin(u) * std::pow(u, -q); },
                                      w1, w2, 1e-13, 0.5, 100000, Exec::serial);
      double lhss = sin_power_tail(q, w1).value;
      double rhss = sin_power_tail(q, w2).value + segs.value;
      CHECK(lhss == doctest::Approx(rhss).epsilon(1e-9));
    }
  }
}

TEST_CASE("poisson mean energy vanishes for the long range kernel") {
  // Mecke formula: pair term, background term and double integral cancel, and
  // the self term is n g(0) / 2 = 0 here. A strong independent oracle.
  for (double s : {-1.0, -0.5}) {
    ModelParams p(s, 1.0, 16);
    RandomStream rs(71);
    SampleStats st = poisson_mean_energy(p, 4000, rs);
    CHECK(std::fabs(st.mean) < 4.0 * st.se);
  }
}

TEST_CASE("poisson mean of the exponential kernel energy is n/2") {
  Window w = Window::centered(16.0);
  RandomStream rs(73);
  Kernel k = Kernel::exponential();
  std::vector<double> vals;
  for (int i = 0; i < 4000; ++i) {
    RandomStream sub = rs.substream(static_cast<std::uint64_t>(i));
    Configuration cfg = sample_poisson(w, 1.0, sub);
    vals.push_back(kernel_energy(cfg, w, k, Exec::serial).value);
  }
  SampleStats st = sample_stats(vals);
  CHECK(std::fabs(st.mean - 8.0) < 4.0 * st.se);
}

TEST_CASE("inequality audit holds on the lattice") {
  int n = 16;
  ModelParams p(-1.5, 1.0, n);
  std::vector<double> xs;
  for (int j = 0; j < n; ++j) xs.push_back(-0.5 * n + j + 0.5);
  Configuration lattice = Configuration::from_positions(xs, p.box());
  EnergyAudit audit = energy_inequality_audit(lattice, p);
  for (const auto& row : audit.rows) {
    INFO(row.name, ": lhs=", row.lhs, " rhs=", row.rhs);
    CHECK(row.holds);
  }
  CHECK(audit.all_hold);
  CHECK(audit.rows.size() == 12);
}

TEST_CASE("inequality audit holds on gibbs samples") {
  int n = 8;
  ModelParams p(-1.0, 1.0, n);
  RandomStream rs(83);
  std::vector<EnergyAudit> audits;
  for (int i = 0; i < 5; ++i) {
    Configuration cfg = exact_coulomb_sample(p, rs);
    audits.push_back(energy_inequality_audit(cfg, p));
    CHECK(audits.back().all_hold);
  }
  AuditFit fit = audit_fit(audits, p);
  CHECK(std::isfinite(fit.a_w2_vs_hs));
  CHECK(std::isfinite(fit.a_gauss_vs_nj2));
}

TEST_CASE("audit precondition rejects out of range s") {
  ModelParams p(-0.5, 1.0, 4);
  Configuration cfg = Configuration::from_positions(
      std::vector<double>{-1.5, -0.5, 0.5, 1.5}, p.box());
  CHECK_THROWS_AS(energy_inequality_audit(cfg, p), std::invalid_argument);
}

TEST_CASE("quadrature error carries the achieved bound") {
  // An unreachable tolerance must fail loudly, not silently degrade.
  ModelParams p(-1.0, 1.0, 6);
  RandomStream rs(89);
  Configuration cfg = uniform_config(6, p.box(), rs);
  QuadratureSettings qs;
  qs.abs_tol = 1e-300;
  qs.max_panels = 100;
  try {
    hamiltonian_fourier(cfg, p, qs);
    FAIL("expected a quadrature failure");
  } catch (const QuadratureError& e) {
    CHECK(e.achieved_bound > 0.0);
  }
}
