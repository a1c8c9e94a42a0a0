#include "rieszlab/energy.hpp"

#include <cmath>
#include <stdexcept>

#include "rieszlab/transport.hpp"

namespace rieszlab {

namespace {

void require_in_box(const Configuration& cfg, const Window& box, const char* who) {
  for (const Atom& a : cfg.atoms())
    if (!box.contains(a.pos))
      throw std::invalid_argument(std::string(who) + ": atom outside the box");
}

std::vector<double> lattice_sites(std::int64_t n) {
  std::vector<double> ys(static_cast<std::size_t>(n));
  for (std::int64_t j = 1; j <= n; ++j)
    ys[static_cast<std::size_t>(j - 1)] =
        static_cast<double>(j) - 0.5 * static_cast<double>(n + 1);
  return ys;
}

}  // namespace

double pair_interaction_sum(const Configuration& cfg, const Kernel& kernel,
                            Exec exec) {
  const auto& atoms = cfg.atoms();
  const std::size_t n = atoms.size();
  if (n < 2) return 0.0;
  return chunked_sum(n - 1, exec, [&](std::size_t i) {
    const double xi = atoms[i].pos;
    const double mi = static_cast<double>(atoms[i].mult);
    double acc = 0.0;
    for (std::size_t j = i + 1; j < n; ++j)
      acc += mi * static_cast<double>(atoms[j].mult) *
             kernel.value_at(atoms[j].pos - xi);
    return acc;
  });
}

EnergyValue kernel_energy(const Configuration& cfg, const Window& window,
                          const Kernel& kernel, Exec exec) {
  EnergyValue out;
  double v = pair_interaction_sum(cfg, kernel, exec);
  const double g0 = kernel.value_at(0.0);
  for (const Atom& a : cfg.atoms()) {
    const double m = static_cast<double>(a.mult);
    v += 0.5 * m * m * g0;
    v -= m * kernel.background(a.pos, window);
  }
  v += 0.5 * kernel.background_double_integral(window);
  out.value = v;
  return out;
}

EnergyValue kernel_energy_fourier(const Configuration& cfg, const Window& window,
                                  const Kernel& kernel,
                                  const QuadratureSettings& qs) {
  const SpectralDensity sd(cfg, window);
  const double inv4pi = 1.0 / (4.0 * M_PI);
  QuadOutcome o;
  double scale = inv4pi;
  QuadratureSettings q = qs;
  switch (kernel.family()) {
    case KernelFamily::riesz: {
      const double cs = riesz_fourier_constant(kernel.s());
      scale = cs * inv4pi;
      q.abs_tol = qs.abs_tol / scale;
      o = spectral_full_power(sd, 1.0 - kernel.s(), q);
      break;
    }
    case KernelFamily::exponential:
      q.abs_tol = qs.abs_tol / scale;
      o = spectral_exp_weight(sd, q);
      break;
    case KernelFamily::gaussian:
      q.abs_tol = qs.abs_tol / scale;
      o = spectral_gauss_weight(sd, q);
      break;
  }
  EnergyValue out;
  out.value = scale * o.value;
  out.err = scale * o.err;
  out.panels = o.panels;
  return out;
}

double hamiltonian_pairwise(const Configuration& cfg, const ModelParams& params,
                            Exec exec, std::vector<std::string>* warnings) {
  const Window box = params.box();
  require_in_box(cfg, box, "hamiltonian_pairwise");
  if (cfg.total_mass() != params.n && warnings)
    warnings->push_back("total mass differs from n; neutrality is assumed downstream");
  return kernel_energy(cfg, box, Kernel::riesz(params.s), exec).value;
}

double hamiltonian_baxter(const Configuration& cfg, const ModelParams& params) {
  if (params.s != -1.0)
    throw std::invalid_argument(
        "hamiltonian_baxter: only the s = -1 energy has this rewriting");
  const Window box = params.box();
  require_in_box(cfg, box, "hamiltonian_baxter");
  if (cfg.total_mass() != params.n)
    throw std::invalid_argument("hamiltonian_baxter: total mass must equal n");
  const std::vector<double> xs = cfg.expanded();
  double acc = 0.0;
  for (std::size_t j = 0; j < xs.size(); ++j) {
    const double y =
        static_cast<double>(j + 1) - 0.5 * static_cast<double>(params.n + 1);
    const double d = xs[j] - y;
    acc += d * d;
  }
  return acc + static_cast<double>(params.n) / 12.0;
}

EnergyValue hamiltonian_fourier(const Configuration& cfg, const ModelParams& params,
                                const QuadratureSettings& qs) {
  const Window box = params.box();
  require_in_box(cfg, box, "hamiltonian_fourier");
  if (cfg.total_mass() != params.n)
    throw std::domain_error(
        "hamiltonian_fourier: non-neutral configuration, the spectral integral "
        "diverges");
  EnergyValue out = kernel_energy_fourier(cfg, box, Kernel::riesz(params.s), qs);
  if (out.err > qs.abs_tol)
    throw QuadratureError("hamiltonian_fourier: tolerance not certified", out.err);
  return out;
}

EnergyAudit energy_inequality_audit(const Configuration& cfg,
                                    const ModelParams& params,
                                    const QuadratureSettings& qs) {
  if (!(params.s > -2.0 && params.s <= -1.0))
    throw std::invalid_argument("energy_inequality_audit: needs -2 < s <= -1");
  const Window box = params.box();
  require_in_box(cfg, box, "energy_inequality_audit");
  if (cfg.total_mass() != params.n)
    throw std::invalid_argument("energy_inequality_audit: mass must equal n");
  const double n = static_cast<double>(params.n);
  const double s = params.s;
  const double cs = riesz_fourier_constant(s);

  EnergyAudit a;
  a.w2_leb = monotone_cost_to_lebesgue(cfg, box, 2.0).total_cost;
  {
    const std::vector<double> xs = cfg.expanded();
    const std::vector<double> ys = lattice_sites(params.n);
    a.w2_lattice = monotone_match_points(xs, ys, 2.0).cost;
  }
  a.h_coulomb = hamiltonian_baxter(cfg, ModelParams(-1.0, params.beta, params.n));
  a.h_s = hamiltonian_pairwise(cfg, params);
  a.h_exp = kernel_energy(cfg, box, Kernel::exponential()).value;
  a.h_gauss = kernel_energy(cfg, box, Kernel::gaussian()).value;

  const SpectralDensity sd(cfg, box);
  const QuadOutcome lf2 = spectral_low_power(sd, 2.0, qs);
  const QuadOutcome hf2 = spectral_high_power(sd, 2.0, qs);
  const QuadOutcome lfs = spectral_low_power(sd, 1.0 - s, qs);
  const QuadOutcome hfe = spectral_exp_weight(sd, qs, /*above_split_only=*/true);
  a.lf2 = lf2.value;
  a.hf2 = hf2.value;
  a.lf_s = lfs.value;
  a.hf_exp = hfe.value;
  a.quad_err = lf2.err + hf2.err + lfs.err + hfe.err;

  for (std::int64_t j = 0; j < params.n; ++j) {
    const double l = box.left + static_cast<double>(j);
    const double nj = static_cast<double>(count(cfg, Window(l, l + 1.0)));
    a.sum_nj2 += nj * nj;
  }

  auto add = [&a](const std::string& name, double lhs, double rhs, bool equality,
                  double extra_tol) {
    AuditRow r;
    r.name = name;
    r.lhs = lhs;
    r.rhs = rhs;
    r.slack = rhs - lhs;
    r.equality = equality;
    const double tol = 1e-9 * (1.0 + std::fabs(lhs) + std::fabs(rhs)) + extra_tol;
    r.holds = equality ? std::fabs(lhs - rhs) <= tol : lhs <= rhs + tol;
    a.rows.push_back(r);
  };

  const double kexp = std::exp(1.0) * (std::exp(1.0) + 1.0) /
                      (2.0 * (std::exp(1.0) - 1.0));
  const double kgauss = std::sqrt(2.0 * M_PI) *
                        std::pow(1.0 - s, 0.5 * (1.0 - s)) *
                        std::exp(-0.5 * (1.0 - s)) / cs;
  const double sqrt2pi = std::sqrt(2.0 * M_PI);

  add("w2_leb <= 2 w2_lattice + n/6", a.w2_leb, 2.0 * a.w2_lattice + n / 6.0,
      false, 0.0);
  add("w2_lattice == h_coulomb - n/12", a.w2_lattice, a.h_coulomb - n / 12.0,
      true, 0.0);
  add("h_coulomb == (lf2 + hf2)/(2 pi)", a.h_coulomb,
      (a.lf2 + a.hf2) / (2.0 * M_PI), true, a.quad_err);
  add("lf2 <= lf_s", a.lf2, a.lf_s, false, lf2.err + lfs.err);
  add("hf2 <= hf_exp", a.hf2, a.hf_exp, false, hf2.err + hfe.err);
  add("lf_s <= (4 pi / C_s) h_s", a.lf_s, 4.0 * M_PI / cs * a.h_s, false, lfs.err);
  add("hf_exp <= 4 pi h_exp", a.hf_exp, 4.0 * M_PI * a.h_exp, false, hfe.err);
  add("h_exp <= 2.9411 sum_nj2 + n", a.h_exp, kexp * a.sum_nj2 + n, false, 0.0);
  add("sum_nj2 <= 2 sqrt(e) (h_gauss + sqrt(2 pi) n)", a.sum_nj2,
      2.0 * std::exp(0.5) * (a.h_gauss + sqrt2pi * n), false, 0.0);
  add("h_gauss <= K(s) h_s", a.h_gauss, kgauss * a.h_s, false, 0.0);
  add("w2_leb <= 2 h_coulomb", a.w2_leb, 2.0 * a.h_coulomb, false, 0.0);
  add("h_coulomb <= (2/C_s) h_s + 2 h_exp", a.h_coulomb,
      2.0 / cs * a.h_s + 2.0 * a.h_exp, false, a.quad_err);

  a.all_hold = true;
  for (const AuditRow& r : a.rows) a.all_hold = a.all_hold && r.holds;
  return a;
}

AuditFit audit_fit(std::span<const EnergyAudit> audits, const ModelParams& params) {
  const double n = static_cast<double>(params.n);
  std::vector<double> hs, w2, nj2, hg, nn;
  hs.reserve(audits.size());
  for (const EnergyAudit& a : audits) {
    hs.push_back(a.h_s);
    w2.push_back(a.w2_leb);
    nj2.push_back(a.sum_nj2);
    hg.push_back(a.h_gauss);
    nn.push_back(n);
  }
  AuditFit f;
  const TwoTermFit f1 = two_term_fit(hs, nn, w2);
  f.a_w2_vs_hs = f1.a;
  f.b_w2_vs_n = f1.b;
  const TwoTermFit f2 = two_term_fit(nj2, nn, hg);
  f.a_gauss_vs_nj2 = f2.a;
  f.b_gauss_vs_n = f2.b;
  return f;
}

}  // namespace rieszlab
