#include "rieszlab/sampler.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "rieszlab/energy.hpp"
#include "rieszlab/generators.hpp"
#include "rieszlab/kernels.hpp"

namespace rieszlab {

namespace {

constexpr long kRevalidateEvery = 10000;

double riesz_g(double r, double p) { return -std::pow(std::fabs(r), p); }

// B(x) for the riesz kernel on the box, p = -s.
double riesz_background(double x, const Window& box, double p) {
  auto prim = [p](double t) {
    const double v = std::pow(std::fabs(t), p + 1.0) / (p + 1.0);
    return t >= 0.0 ? v : -v;
  };
  return -(prim(x - box.left) - prim(x - box.right));
}

double full_energy(const std::vector<double>& xs, const ModelParams& params) {
  Configuration cfg = Configuration::from_positions(xs, params.box());
  return hamiltonian_pairwise(cfg, params, Exec::serial);
}

struct Chain {
  std::vector<double> x;
  double h = 0.0;
  double sigma = 1.0;
  long accepted = 0;
  long proposed = 0;
};

void chain_init(Chain& c, const ModelParams& params) {
  const std::int64_t n = params.n;
  c.x.resize(static_cast<std::size_t>(n));
  for (std::int64_t j = 1; j <= n; ++j)
    c.x[static_cast<std::size_t>(j - 1)] =
        static_cast<double>(j) - 0.5 * static_cast<double>(n + 1);
  c.h = full_energy(c.x, params);
}

void chain_step(Chain& c, const ModelParams& params, const McmcOptions& opt,
                const Window& box, double p_exponent, RandomStream& rs) {
  const std::size_t n = c.x.size();
  const std::size_t i = static_cast<std::size_t>(rs.uniform_index(n));
  const double xi = c.x[i];
  double xp;
  if (rs.uniform() < opt.p_global)
    xp = rs.uniform(box.left, box.right);
  else
    xp = xi + c.sigma * rs.gaussian();
  ++c.proposed;
  if (!box.contains(xp)) return;  // zero density outside
  double dh = -(riesz_background(xp, box, p_exponent) -
                riesz_background(xi, box, p_exponent));
  for (std::size_t j = 0; j < n; ++j) {
    if (j == i) continue;
    dh += riesz_g(xp - c.x[j], p_exponent) - riesz_g(xi - c.x[j], p_exponent);
  }
  if (dh <= 0.0 || rs.uniform() < std::exp(-params.beta * dh)) {
    c.x[i] = xp;
    c.h += dh;
    ++c.accepted;
  }
}

SampleBatch direct_uniform_batch(const ModelParams& params, long samples,
                                 RandomStream& rs, SamplerReport* report) {
  const Window box = params.box();
  SampleBatch batch;
  batch.provenance = "binomial-direct";
  batch.configs.reserve(static_cast<std::size_t>(samples));
  batch.energies.reserve(static_cast<std::size_t>(samples));
  std::vector<double> xs(static_cast<std::size_t>(params.n));
  for (long k = 0; k < samples; ++k) {
    for (double& x : xs) x = rs.uniform(box.left, box.right);
    Configuration cfg = Configuration::from_positions(xs, box);
    batch.energies.push_back(hamiltonian_pairwise(cfg, params, Exec::serial));
    batch.configs.push_back(std::move(cfg));
  }
  if (report) {
    report->acceptance_rate = 1.0;
    report->iact = 1.0;
    report->ess = static_cast<double>(samples);
    report->sigma_final = 0.0;
    report->steps = samples;
  }
  return batch;
}

}  // namespace

SampleBatch mcmc_sample(const ModelParams& params, const McmcOptions& opt,
                        RandomStream& rs, SamplerReport* report) {
  if (params.n < 1) throw std::invalid_argument("mcmc_sample: n must be >= 1");
  if (opt.steps < 1 || opt.thin < 1 || opt.burn_in < 0)
    throw std::invalid_argument("mcmc_sample: bad chain options");
  if (params.beta == 0.0)
    return direct_uniform_batch(params, opt.steps / opt.thin, rs, report);

  const Window box = params.box();
  const double p_exponent = -params.s;
  Chain c;
  chain_init(c, params);
  c.sigma = opt.sigma_prop > 0.0 ? opt.sigma_prop : 1.0 / std::sqrt(params.beta);

  // Burn-in with optional sigma adaptation over 200-proposal windows.
  long window_acc = 0, window_count = 0;
  long since_revalidate = 0;
  for (long t = 0; t < opt.burn_in; ++t) {
    const long acc0 = c.accepted;
    chain_step(c, params, opt, box, p_exponent, rs);
    window_acc += c.accepted - acc0;
    ++window_count;
    if (opt.adapt && window_count == 200) {
      const double rate = static_cast<double>(window_acc) / 200.0;
      if (rate < 0.3) c.sigma *= 0.85;
      if (rate > 0.5) c.sigma *= 1.15;
      c.sigma = std::clamp(c.sigma, 1e-3, static_cast<double>(params.n));
      window_acc = window_count = 0;
    }
    if (++since_revalidate == kRevalidateEvery) {
      const double full = full_energy(c.x, params);
      if (std::fabs(full - c.h) > 1e-8 * std::max<double>(1, params.n))
        throw std::logic_error("mcmc_sample: incremental energy drifted");
      c.h = full;
      since_revalidate = 0;
    }
  }
  c.accepted = c.proposed = 0;  // report post burn-in acceptance

  SampleBatch batch;
  batch.provenance = "mcmc";
  const long samples = opt.steps / opt.thin;
  batch.configs.reserve(static_cast<std::size_t>(samples));
  batch.energies.reserve(static_cast<std::size_t>(samples));
  for (long t = 1; t <= opt.steps; ++t) {
    chain_step(c, params, opt, box, p_exponent, rs);
    if (++since_revalidate == kRevalidateEvery) {
      const double full = full_energy(c.x, params);
      if (std::fabs(full - c.h) > 1e-8 * std::max<double>(1, params.n))
        throw std::logic_error("mcmc_sample: incremental energy drifted");
      c.h = full;
      since_revalidate = 0;
    }
    if (t % opt.thin == 0 && static_cast<long>(batch.configs.size()) < samples) {
      batch.configs.push_back(Configuration::from_positions(c.x, box));
      batch.energies.push_back(c.h);
    }
  }
  if (report) {
    report->acceptance_rate =
        c.proposed > 0 ? static_cast<double>(c.accepted) / static_cast<double>(c.proposed)
                       : 0.0;
    report->iact = integrated_autocorr_time(batch.energies);
    report->ess = report->iact > 0.0
                      ? static_cast<double>(batch.energies.size()) / report->iact
                      : 0.0;
    report->sigma_final = c.sigma;
    report->steps = opt.steps;
  }
  return batch;
}

SampleBatch mcmc_sample_chains(const ModelParams& params, const McmcOptions& opt,
                               int chains, RandomStream& rs,
                               std::vector<SamplerReport>* reports, Exec exec) {
  if (chains < 1) throw std::invalid_argument("mcmc_sample_chains: chains < 1");
  struct One {
    SampleBatch batch;
    SamplerReport report;
  };
  std::vector<One> runs = indexed_map<One>(
      static_cast<std::size_t>(chains), exec, [&](std::size_t i) {
        One one;
        RandomStream sub = rs.substream(static_cast<std::uint64_t>(i));
        one.report.seed = static_cast<std::uint64_t>(i);
        one.batch = mcmc_sample(params, opt, sub, &one.report);
        return one;
      });
  SampleBatch merged;
  merged.provenance = "mcmc";
  if (reports) reports->clear();
  for (One& one : runs) {
    for (auto& cfg : one.batch.configs) merged.configs.push_back(std::move(cfg));
    for (double e : one.batch.energies) merged.energies.push_back(e);
    if (reports) reports->push_back(one.report);
  }
  return merged;
}

Configuration exact_coulomb_sample(const ModelParams& params, RandomStream& rs,
                                   long max_attempts, long* attempts_out) {
  if (params.s != -1.0)
    throw std::invalid_argument(
        "exact_coulomb_sample: the ordered-Gaussian representation needs s = -1");
  if (params.n < 1) throw std::invalid_argument("exact_coulomb_sample: n must be >= 1");
  const Window box = params.box();
  if (!(params.beta > 0.0))
    throw std::invalid_argument("exact_coulomb_sample: beta must be positive");
  const double sigma = 1.0 / std::sqrt(2.0 * params.beta);
  const std::size_t n = static_cast<std::size_t>(params.n);
  std::vector<double> xs(n);
  for (long attempt = 1; attempt <= max_attempts; ++attempt) {
    bool ok = true;
    double prev = -std::numeric_limits<double>::infinity();
    for (std::size_t j = 0; j < n; ++j) {
      const double y =
          static_cast<double>(j + 1) - 0.5 * static_cast<double>(params.n + 1);
      const double x = rs.gaussian(y, sigma);
      if (x <= prev || !box.contains(x)) {
        ok = false;
        break;
      }
      xs[j] = x;
      prev = x;
    }
    if (ok) {
      if (attempts_out) *attempts_out = attempt;
      return Configuration::from_positions(xs, box);
    }
  }
  throw std::runtime_error(
      "exact_coulomb_sample: rejection budget exhausted (acceptance decays fast "
      "in n); fall back to mcmc_sample");
}

std::vector<double> uniform_beta_grid(double beta, int points) {
  if (!(beta > 0.0) || points < 2)
    throw std::invalid_argument("uniform_beta_grid: bad arguments");
  std::vector<double> grid(static_cast<std::size_t>(points));
  for (int k = 0; k < points; ++k)
    grid[static_cast<std::size_t>(k)] =
        beta * static_cast<double>(k) / static_cast<double>(points - 1);
  return grid;
}

namespace {

double trapezoid(std::span<const double> xs, std::span<const double> ys) {
  double acc = 0.0;
  for (std::size_t k = 1; k < xs.size(); ++k)
    acc += 0.5 * (xs[k] - xs[k - 1]) * (ys[k] + ys[k - 1]);
  return acc;
}

}  // namespace

LogZEstimate estimate_log_partition(const ModelParams& params,
                                    std::span<const double> beta_grid,
                                    long samples_per_point, RandomStream& rs,
                                    Exec exec) {
  if (beta_grid.size() < 2 || beta_grid.front() != 0.0)
    throw std::invalid_argument(
        "estimate_log_partition: grid must start at 0 with >= 2 points");
  for (std::size_t k = 1; k < beta_grid.size(); ++k)
    if (!(beta_grid[k] > beta_grid[k - 1]))
      throw std::invalid_argument("estimate_log_partition: grid must increase");

  const long thin = 5 * std::max<long>(1, params.n);
  const long burn = 1000 * std::max<long>(1, params.n);
  struct Point {
    double mean = 0.0, se = 0.0;
  };
  std::vector<Point> pts = indexed_map<Point>(
      beta_grid.size(), exec, [&](std::size_t k) {
        RandomStream sub = rs.substream(static_cast<std::uint64_t>(k));
        ModelParams pk(params.s, beta_grid[k], params.n);
        McmcOptions opt;
        opt.thin = thin;
        opt.burn_in = burn;
        opt.steps = samples_per_point * thin;
        SamplerReport rep;
        SampleBatch batch = mcmc_sample(pk, opt, sub, &rep);
        const SampleStats st = sample_stats(batch.energies);
        Point p;
        p.mean = st.mean;
        p.se = st.se * std::sqrt(std::max(1.0, rep.iact));
        return p;
      });

  LogZEstimate est;
  est.betas.assign(beta_grid.begin(), beta_grid.end());
  for (const Point& p : pts) {
    est.mean_energies.push_back(p.mean);
    est.se_energies.push_back(p.se);
  }
  est.log_z = -trapezoid(est.betas, est.mean_energies);

  double var = 0.0;
  const std::size_t np = beta_grid.size();
  for (std::size_t k = 0; k < np; ++k) {
    const double left = k > 0 ? beta_grid[k] - beta_grid[k - 1] : 0.0;
    const double right = k + 1 < np ? beta_grid[k + 1] - beta_grid[k] : 0.0;
    const double w = 0.5 * (left + right);
    var += w * w * pts[k].se * pts[k].se;
  }
  est.se = std::sqrt(var);

  if (np >= 3 && np % 2 == 1) {
    std::vector<double> bh, eh;
    for (std::size_t k = 0; k < np; k += 2) {
      bh.push_back(est.betas[k]);
      eh.push_back(est.mean_energies[k]);
    }
    est.refinement = std::fabs(-trapezoid(bh, eh) - est.log_z) / 3.0;
  }
  return est;
}

PartitionBoundsReport verify_partition_bounds(const ModelParams& params,
                                              double log_z) {
  PartitionBoundsReport rep;
  rep.log_z = log_z;
  rep.c_const = 1.0 + params.beta * cell_mean_energy(params.s);
  rep.lower = -rep.c_const * static_cast<double>(params.n);
  rep.upper = 0.0;
  const double tol = 1e-9 * (1.0 + std::fabs(rep.lower));
  rep.ok = log_z >= rep.lower - tol && log_z <= rep.upper + tol;
  return rep;
}

SampleStats poisson_mean_energy(const ModelParams& params, long samples,
                                RandomStream& rs, Exec exec) {
  const Window box = params.box();
  const Kernel kernel = Kernel::riesz(params.s);
  std::vector<double> es = indexed_map<double>(
      static_cast<std::size_t>(samples), exec, [&](std::size_t i) {
        RandomStream sub = rs.substream(static_cast<std::uint64_t>(i));
        const Configuration cfg = sample_poisson(box, 1.0, sub);
        return kernel_energy(cfg, box, kernel, Exec::serial).value;
      });
  return sample_stats(es);
}

EntropyReport entropy_bound_check(const ModelParams& params,
                                  double poisson_mean_h, double log_z) {
  const double n = static_cast<double>(params.n);
  EntropyReport rep;
  rep.c_const = 1.0 + params.beta * cell_mean_energy(params.s);
  rep.entropy = -params.beta * poisson_mean_h - log_z + n - n * std::log(n) +
                std::lgamma(n + 1.0);
  rep.lower = 0.0;
  rep.upper = (rep.c_const + 1.0) * n;
  const double tol = 1e-9 * (1.0 + rep.upper);
  rep.ok = rep.entropy >= rep.lower - tol && rep.entropy <= rep.upper + tol;
  return rep;
}

}  // namespace rieszlab
