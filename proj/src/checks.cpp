#include "rieszlab/checks.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <numeric>
#include <sstream>
#include <stdexcept>

#include "rieszlab/energy.hpp"
#include "rieszlab/generators.hpp"
#include "rieszlab/kernels.hpp"
#include "rieszlab/rigidity.hpp"
#include "rieszlab/sampler.hpp"
#include "rieszlab/stats.hpp"
#include "rieszlab/transport.hpp"

namespace rieszlab {
namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

std::string fmt(double x) {
  std::ostringstream os;
  os.precision(6);
  os << x;
  return os.str();
}

// Distance on the unit circle between two phases.
double circle_dist(double a, double b) {
  double d = std::fabs(a - b);
  d -= std::floor(d);
  return std::min(d, 1.0 - d);
}

Configuration random_uniform_config(int n, RandomStream& rs) {
  ModelParams p(-1.0, 1.0, n);
  Window box = p.box();
  std::vector<double> xs(static_cast<std::size_t>(n));
  for (auto& x : xs) x = rs.uniform(box.left, box.right);
  return Configuration::from_positions(xs, box);
}

// Stationarized tiled Coulomb field: i.i.d. exact n-particle tiles glued on a
// random lattice of period n, restricted to `target`.
Configuration tiled_coulomb(int n, Window target, RandomStream& rs) {
  ModelParams tile(-1.0, 1.0, n);
  auto sampler = [tile](RandomStream& tile_rs) {
    return exact_coulomb_sample(tile, tile_rs);
  };
  return stationarize(sampler, static_cast<double>(n), target, rs);
}

}  // namespace

CheckResult check_hand_values() {
  auto t0 = Clock::now();
  CheckResult r;
  r.name = "hand-values";

  ModelParams p1(-1.0, 1.0, 1);
  Configuration one = Configuration::from_positions(std::vector<double>{0.0}, p1.box());
  double h1p = hamiltonian_pairwise(one, p1);
  double h1b = hamiltonian_baxter(one, p1);

  ModelParams p2(-1.0, 1.0, 2);
  Configuration two =
      Configuration::from_positions(std::vector<double>{-0.5, 0.5}, p2.box());
  double h2p = hamiltonian_pairwise(two, p2);
  double h2b = hamiltonian_baxter(two, p2);

  double c1 = riesz_fourier_constant(-1.0);

  bool ok = std::fabs(h1p - 1.0 / 12.0) < 1e-12 &&
            std::fabs(h1b - 1.0 / 12.0) < 1e-12 &&
            std::fabs(h2p - 1.0 / 6.0) < 1e-12 &&
            std::fabs(h2b - 1.0 / 6.0) < 1e-12 && std::fabs(c1 - 2.0) < 1e-12;

  r.pass = ok;
  r.detail = "H(delta_0,n=1)=" + fmt(h1p) + " (want 1/12), H({-1/2,1/2},n=2)=" +
             fmt(h2p) + " (want 1/6), fourier constant at s=-1: " + fmt(c1) +
             " (want 2)";
  r.elapsed_s = seconds_since(t0);
  return r;
}

CheckResult check_energy_triple_agreement(long configs, std::uint64_t seed,
                                          BaxterFn baxter) {
  auto t0 = Clock::now();
  CheckResult r;
  r.name = "energy-triple-agreement";
  if (!baxter) {
    baxter = [](const Configuration& c, const ModelParams& p) {
      return hamiltonian_baxter(c, p);
    };
  }

  RandomStream root(seed);
  double worst_pb = 0.0;
  double worst_fb = 0.0;
  QuadratureSettings qs;  // abs_tol 1e-8, well below 1e-6 of any value here
  for (long i = 0; i < configs; ++i) {
    RandomStream sub = root.substream(static_cast<std::uint64_t>(i));
    int n = 1 + static_cast<int>(sub.uniform_index(50));
    Configuration cfg = random_uniform_config(n, sub);
    ModelParams p(-1.0, 1.0, n);
    double hb = baxter(cfg, p);
    double hp = hamiltonian_pairwise(cfg, p);
    EnergyValue hf = hamiltonian_fourier(cfg, p, qs);
    double scale = std::fabs(hb);
    worst_pb = std::max(worst_pb, std::fabs(hp - hb) / scale);
    worst_fb = std::max(worst_fb, std::fabs(hf.value - hb) / scale);
  }
  r.pass = worst_pb < 1e-10 && worst_fb < 1e-6;
  r.detail = "over " + std::to_string(configs) +
             " random configs (n<=50): max rel dev pairwise/reference = " +
             fmt(worst_pb) + " (tol 1e-10), spectral/reference = " +
             fmt(worst_fb) + " (tol 1e-6)";
  r.elapsed_s = seconds_since(t0);
  return r;
}

CheckResult check_partition_bounds(std::uint64_t seed) {
  auto t0 = Clock::now();
  CheckResult r;
  r.name = "partition-bounds";

  RandomStream root(seed);
  bool ok = true;
  std::ostringstream detail;
  const int ns[] = {1, 4, 8};
  for (int k = 0; k < 3; ++k) {
    int n = ns[k];
    ModelParams p(-1.0, 1.0, n);
    RandomStream sub = root.substream(static_cast<std::uint64_t>(k));
    auto grid = uniform_beta_grid(1.0, 21);
    LogZEstimate est = estimate_log_partition(p, grid, 4000, sub);
    PartitionBoundsReport rep = verify_partition_bounds(p, est.log_z);
    ok = ok && rep.ok;
    detail << "n=" << n << ": logZ=" << fmt(est.log_z) << " in ["
           << fmt(rep.lower) << ", 0] " << (rep.ok ? "yes" : "NO") << "; ";
    if (n == 1) {
      // Closed form: logZ = -1/12 + log(sqrt(pi) erf(1/2)).
      double oracle = -1.0 / 12.0 + std::log(std::sqrt(M_PI) * std::erf(0.5));
      double tol = 2.0 * (est.se + est.refinement) + 1e-6;
      bool hit = std::fabs(est.log_z - oracle) <= tol;
      ok = ok && hit;
      detail << "n=1 closed form " << fmt(oracle) << " dev "
             << fmt(std::fabs(est.log_z - oracle)) << " tol " << fmt(tol)
             << (hit ? " yes" : " NO") << "; ";
    }
  }
  r.pass = ok;
  r.detail = detail.str();
  r.elapsed_s = seconds_since(t0);
  return r;
}

CheckResult check_exact_vs_mcmc(std::uint64_t seed) {
  auto t0 = Clock::now();
  CheckResult r;
  r.name = "exact-vs-mcmc";

  ModelParams p(-1.0, 1.0, 8);
  RandomStream root(seed);
  const long m = 10000;

  RandomStream ex = root.substream(1);
  std::vector<double> exact_e;
  exact_e.reserve(static_cast<std::size_t>(m));
  for (long i = 0; i < m; ++i) {
    Configuration c = exact_coulomb_sample(p, ex);
    exact_e.push_back(hamiltonian_baxter(c, p));
  }

  McmcOptions opt;
  opt.thin = 160;
  opt.steps = opt.thin * m;
  opt.burn_in = 20000;
  SamplerReport rep;
  RandomStream chain_rs = root.substream(2);
  SampleBatch batch = mcmc_sample(p, opt, chain_rs, &rep);

  KsResult ks = ks_two_sample(exact_e, batch.energies);
  r.pass = ks.p > 0.01;
  r.detail = "n=8 beta=1: KS(exact rejection vs mcmc energies, 10^4 each) D=" +
             fmt(ks.d) + " p=" + fmt(ks.p) + " (need p>0.01); mcmc acc rate " +
             fmt(rep.acceptance_rate);
  r.elapsed_s = seconds_since(t0);
  return r;
}

CheckResult check_transport_bound_chain(std::uint64_t seed) {
  auto t0 = Clock::now();
  CheckResult r;
  r.name = "transport-cost-bounded";

  RandomStream root(seed);
  bool ok = true;
  std::ostringstream detail;
  const double svals[] = {-1.5, -1.0};
  const int ns[] = {25, 50, 100};
  int sub_id = 0;
  for (double s : svals) {
    std::vector<double> xs, means;
    detail << "s=" << fmt(s) << ":";
    for (int n : ns) {
      ModelParams p(s, 1.0, n);
      McmcOptions opt;
      opt.thin = 10 * n;
      opt.steps = 200 * opt.thin;
      opt.burn_in = 400 * n;
      RandomStream chain_rs = root.substream(static_cast<std::uint64_t>(sub_id++));
      SampleBatch batch = mcmc_sample(p, opt, chain_rs);
      std::vector<double> per;
      per.reserve(batch.configs.size());
      for (const auto& c : batch.configs) {
        per.push_back(monotone_cost_to_lebesgue(c, p.box(), 2.0).total_cost / n);
      }
      SampleStats st = sample_stats(per);
      xs.push_back(static_cast<double>(n));
      means.push_back(st.mean);
      detail << " W2^2/n(n=" << n << ")=" << fmt(st.mean) << "+-" << fmt(st.se);
    }
    MannKendall mk = mann_kendall(means);
    bool flat = !mk.increasing_at(0.05);
    ok = ok && flat;
    detail << " trend p_incr=" << fmt(mk.p_increasing)
           << (flat ? " flat" : " INCREASING") << "; ";
  }
  r.pass = ok;
  r.detail = detail.str();
  r.elapsed_s = seconds_since(t0);
  return r;
}

CheckResult check_matching_optimality(long instances, std::uint64_t seed) {
  auto t0 = Clock::now();
  CheckResult r;
  r.name = "matching-optimality";

  RandomStream root(seed);
  double worst = 0.0;
  for (long i = 0; i < instances; ++i) {
    RandomStream sub = root.substream(static_cast<std::uint64_t>(i));
    int n = 2 + static_cast<int>(sub.uniform_index(7));
    double p = (i % 2 == 0) ? 1.0 : 2.0;
    std::vector<double> src(static_cast<std::size_t>(n)),
        dst(static_cast<std::size_t>(n));
    for (auto& x : src) x = sub.uniform(0.0, 10.0);
    for (auto& y : dst) y = sub.uniform(0.0, 10.0);

    Matching m = monotone_match_points(src, dst, p);

    std::vector<int> perm(static_cast<std::size_t>(n));
    std::iota(perm.begin(), perm.end(), 0);
    double best = std::numeric_limits<double>::infinity();
    do {
      double c = 0.0;
      for (int j = 0; j < n; ++j) {
        c += std::pow(std::fabs(src[static_cast<std::size_t>(j)] -
                                dst[static_cast<std::size_t>(perm[static_cast<std::size_t>(j)])]),
                      p);
      }
      best = std::min(best, c);
    } while (std::next_permutation(perm.begin(), perm.end()));

    worst = std::max(worst, std::fabs(m.cost - best) / (1.0 + best));
  }
  r.pass = worst < 1e-9;
  r.detail = "monotone vs exhaustive matching on " + std::to_string(instances) +
             " random instances (n<=8, p in {1,2}): max rel gap " + fmt(worst);
  r.elapsed_s = seconds_since(t0);
  return r;
}

CheckResult check_hyperuniformity_contrast(std::uint64_t seed) {
  auto t0 = Clock::now();
  CheckResult r;
  r.name = "hyperuniformity-contrast";

  RandomStream root(seed);
  const long samples = 500;
  std::vector<double> lengths;
  for (int l = 10; l <= 200; l += 10) lengths.push_back(static_cast<double>(l));
  Window target = Window::centered(208.0);

  std::vector<Configuration> coulomb;
  coulomb.reserve(static_cast<std::size_t>(samples));
  RandomStream cs = root.substream(1);
  for (long i = 0; i < samples; ++i) coulomb.push_back(tiled_coulomb(32, target, cs));
  std::vector<CurvePoint> vc = variance_curve(coulomb, lengths);
  std::vector<double> cvals;
  for (const auto& pt : vc) cvals.push_back(pt.value);
  MannKendall mk = mann_kendall(cvals);
  bool coulomb_flat = !mk.increasing_at(0.05);
  double cmax = *std::max_element(cvals.begin(), cvals.end());

  std::vector<Configuration> pois;
  pois.reserve(static_cast<std::size_t>(samples));
  RandomStream ps = root.substream(2);
  for (long i = 0; i < samples; ++i) {
    RandomStream sub = ps.substream(static_cast<std::uint64_t>(i));
    pois.push_back(sample_poisson(target, 1.0, sub));
  }
  std::vector<CurvePoint> vp = variance_curve(pois, lengths);
  std::vector<double> pvals;
  for (const auto& pt : vp) pvals.push_back(pt.value);
  LinearFit fit = linear_fit(lengths, pvals);
  bool pois_linear = std::fabs(fit.slope - 1.0) <= 0.1;

  r.pass = coulomb_flat && pois_linear;
  r.detail = "coulomb tiles: count variance stays bounded (max " + fmt(cmax) +
             ", trend p_incr=" + fmt(mk.p_increasing) +
             (coulomb_flat ? ", flat" : ", INCREASING") +
             "); poisson: variance slope " + fmt(fit.slope) +
             (pois_linear ? " in [0.9,1.1]" : " OUTSIDE [0.9,1.1]");
  r.elapsed_s = seconds_since(t0);
  return r;
}

CheckResult check_shift_uniformity(std::uint64_t seed) {
  auto t0 = Clock::now();
  CheckResult r;
  r.name = "shift-uniformity";

  RandomStream root(seed);
  const long samples = 500;
  const long m = 250;
  Window target(-40.0, 296.0);

  RandomStream cs = root.substream(1);
  std::vector<Configuration> fields;
  fields.reserve(static_cast<std::size_t>(samples));
  std::vector<double> us;
  us.reserve(static_cast<std::size_t>(samples));
  for (long i = 0; i < samples; ++i) {
    fields.push_back(tiled_coulomb(32, target, cs));
    ShiftReport sr = shift_estimator(fields.back(), 0.0, m);
    us.push_back(sr.u);
  }
  UniformityReport ur = uniformity_test(us);
  bool uniform_ok = ur.pass(0.01);

  // Covariance under translation, exact on lattices.
  bool lattice_ok = true;
  RandomStream ls = root.substream(2);
  const double vs[] = {0.1, 0.7, 2.3};
  for (int i = 0; i < 50 && lattice_ok; ++i) {
    RandomStream sub = ls.substream(static_cast<std::uint64_t>(i));
    Configuration lat = sample_stationarized_lattice(Window(0.0, 100.0), sub);
    ShiftReport base = shift_estimator(lat, 0.0, 40);
    for (double v : vs) {
      ShiftReport moved = shift_estimator(translate(lat, v), 0.0, 40);
      if (circle_dist(moved.u, base.u + v) > 1e-9) lattice_ok = false;
    }
  }

  // Approximate covariance on the interacting field.
  long close = 0;
  const long probe = 50;
  const double v = 0.7;
  for (long i = 0; i < probe; ++i) {
    ShiftReport base = shift_estimator(fields[static_cast<std::size_t>(i)], 0.0, m);
    ShiftReport moved =
        shift_estimator(translate(fields[static_cast<std::size_t>(i)], v), 0.0, m);
    if (circle_dist(moved.u, base.u + v) <= 0.1) ++close;
  }
  bool cov_ok = close >= (probe * 9) / 10;

  r.pass = uniform_ok && lattice_ok && cov_ok;
  r.detail = "phase over " + std::to_string(samples) +
             " coulomb fields: min fourier p=" +
             fmt(*std::min_element(ur.fourier_p.begin(), ur.fourier_p.end())) +
             ", KS p=" + fmt(ur.ks_p) + (uniform_ok ? " uniform" : " NOT uniform") +
             "; lattice translation covariance " +
             (lattice_ok ? "exact" : "BROKEN") + "; coulomb covariance " +
             std::to_string(close) + "/" + std::to_string(probe) + " within 0.1";
  r.elapsed_s = seconds_since(t0);
  return r;
}

CheckResult check_rigidity_predictor(std::uint64_t seed) {
  auto t0 = Clock::now();
  CheckResult r;
  r.name = "exterior-predictor";

  RandomStream root(seed);
  const long trials = 500;
  const long m = 2000;
  Window domain = Window::centered(10.0);

  long agree_g = 0;
  RandomStream gs = root.substream(1);
  PerturbationLaw law = PerturbationLaw::gaussian(0.5);
  for (long i = 0; i < trials; ++i) {
    RandomStream sub = gs.substream(static_cast<std::uint64_t>(i));
    Configuration cfg =
        sample_perturbed_lattice(Window::centered(10000.0), law, sub);
    RigidityReport rep = exterior_count_predictor(cfg, domain, m);
    if (rep.agree()) ++agree_g;
  }

  long agree_c = 0;
  RandomStream cs = root.substream(2);
  for (long i = 0; i < trials; ++i) {
    Configuration cfg = tiled_coulomb(32, Window::centered(4220.0), cs);
    RigidityReport rep = exterior_count_predictor(cfg, domain, m);
    if (rep.agree()) ++agree_c;
  }

  long agree_p = 0;
  RandomStream ps = root.substream(3);
  for (long i = 0; i < trials; ++i) {
    RandomStream sub = ps.substream(static_cast<std::uint64_t>(i));
    Configuration cfg = sample_poisson(Window::centered(4800.0), 1.0, sub);
    RigidityReport rep = exterior_count_predictor(cfg, domain, m);
    if (rep.agree()) ++agree_p;
  }

  double pg = static_cast<double>(agree_g) / trials;
  double pc = static_cast<double>(agree_c) / trials;
  double pp = static_cast<double>(agree_p) / trials;
  // Two-proportion z, coulomb vs poisson.
  double pool = (pc + pp) / 2.0;
  double z = (pc - pp) /
             std::sqrt(std::max(1e-12, pool * (1.0 - pool) * (2.0 / trials)));
  bool ok = pg >= 0.95 && pc >= 0.90 && pp < 0.5 && z > 2.58;

  r.pass = ok;
  r.detail = "agreement of predicted vs actual interior count, m=2000: "
             "perturbed lattice " + fmt(pg) + " (need >=0.95), coulomb tiles " +
             fmt(pc) + " (need >=0.90), poisson control " + fmt(pp) +
             " (need <0.5, z vs coulomb " + fmt(z) + " need >2.58)";
  r.elapsed_s = seconds_since(t0);
  return r;
}

CheckResult check_tiled_bound(std::uint64_t seed) {
  auto t0 = Clock::now();
  CheckResult r;
  r.name = "tiling-cost-inequality";

  RandomStream root(seed);
  bool ok = true;
  std::ostringstream detail;
  const int ns[] = {25, 50};
  const double lengths[] = {10.0, 20.0, 40.0, 80.0};
  int sub_id = 0;
  for (int n : ns) {
    ModelParams p(-1.0, 1.0, n);
    auto tile_sampler = [p](RandomStream& rs) {
      return exact_coulomb_sample(p, rs);
    };
    RandomStream bs = root.substream(sub_id++);
    CostBound bound = tiled_cost_bound(tile_sampler, 2.0, 200, bs);

    Window target = Window::centered(96.0);
    auto field_sampler = [&, p, target](RandomStream& rs) {
      auto ts = [p](RandomStream& trs) { return exact_coulomb_sample(p, trs); };
      return stationarize(ts, static_cast<double>(n), target, rs);
    };
    RandomStream fs = root.substream(sub_id++);
    std::vector<CostCurvePoint> curve = stationary_cost_estimator(
        field_sampler, TransportTarget::lebesgue, 2.0, lengths, 200, fs);

    detail << "n=" << n << ": tile bound " << fmt(bound.value) << "+-"
           << fmt(bound.stderr_) << ", windowed cost/length";
    for (const auto& pt : curve) {
      double slack = 3.0 * std::hypot(pt.stderr_, bound.stderr_);
      bool below = pt.mean_cost_per_length <= bound.value + slack;
      ok = ok && below;
      detail << " L=" << pt.length << ":" << fmt(pt.mean_cost_per_length)
             << (below ? "" : "(ABOVE)");
    }
    detail << "; ";
  }
  r.pass = ok;
  r.detail = detail.str();
  r.elapsed_s = seconds_since(t0);
  return r;
}

CheckResult check_entropy_bound(std::uint64_t seed) {
  auto t0 = Clock::now();
  CheckResult r;
  r.name = "entropy-bounds";

  RandomStream root(seed);
  bool ok = true;
  std::ostringstream detail;
  const int ns[] = {1, 4, 8};
  for (int k = 0; k < 3; ++k) {
    int n = ns[k];
    ModelParams p(-1.0, 1.0, n);
    RandomStream sub = root.substream(static_cast<std::uint64_t>(k));
    SampleStats me = poisson_mean_energy(p, 20000, sub);
    auto grid = uniform_beta_grid(1.0, 21);
    RandomStream zsub = root.substream(static_cast<std::uint64_t>(10 + k));
    LogZEstimate est = estimate_log_partition(p, grid, 4000, zsub);
    EntropyReport rep = entropy_bound_check(p, me.mean, est.log_z);
    ok = ok && rep.ok;
    detail << "n=" << n << ": Ent=" << fmt(rep.entropy) << " in [0, "
           << fmt(rep.upper) << "] " << (rep.ok ? "yes" : "NO") << "; ";
  }

  // Free case, one particle: everything is exact and the entropy is 1.
  ModelParams free_p;
  free_p.s = -1.0;
  free_p.beta = 0.0;
  free_p.n = 1;
  EntropyReport rep0 = entropy_bound_check(free_p, 0.0, 0.0);
  bool exact1 = rep0.ok && rep0.entropy == 1.0;
  ok = ok && exact1;
  detail << "beta=0 n=1: Ent=" << fmt(rep0.entropy) << (exact1 ? " == 1" : " != 1");

  r.pass = ok;
  r.detail = detail.str();
  r.elapsed_s = seconds_since(t0);
  return r;
}

CheckResult run_acceptance_criterion(int index, std::uint64_t seed) {
  switch (index) {
    case 1: return check_energy_triple_agreement(100, seed);
    case 2: return check_hand_values();
    case 3: return check_partition_bounds(seed);
    case 4: return check_exact_vs_mcmc(seed);
    case 5: return check_transport_bound_chain(seed);
    case 6: return check_matching_optimality(200, seed);
    case 7: return check_hyperuniformity_contrast(seed);
    case 8: return check_shift_uniformity(seed);
    case 9: return check_rigidity_predictor(seed);
    case 10: return check_tiled_bound(seed);
    case 11: return check_entropy_bound(seed);
    default: throw std::invalid_argument("acceptance criterion index must be 1..11");
  }
}

std::vector<CheckResult> run_selftest(bool full, std::uint64_t seed) {
  std::vector<CheckResult> out;
  if (full) {
    for (int i = 1; i <= 11; ++i) out.push_back(run_acceptance_criterion(i, seed + i));
    return out;
  }
  out.push_back(check_hand_values());
  out.push_back(check_energy_triple_agreement(15, seed + 1));
  out.push_back(check_matching_optimality(40, seed + 6));
  return out;
}

}  // namespace rieszlab
