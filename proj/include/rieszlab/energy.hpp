#pragma once

#include <span>
#include <string>
#include <vector>

#include "rieszlab/core.hpp"
#include "rieszlab/kernels.hpp"
#include "rieszlab/oscint.hpp"
#include "rieszlab/parallel.hpp"

namespace rieszlab {

struct EnergyValue {
  double value = 0.0;
  double err = 0.0;  // certified absolute bound (0 for closed forms)
  long panels = 0;
  std::vector<std::string> warnings;
};

// Sum over distinct atom pairs of m_i m_j g(x_i - x_j).
double pair_interaction_sum(const Configuration& cfg, const Kernel& kernel,
                            Exec exec = Exec::parallel);

// Full double-integral energy 1/2 iint g d(nu x nu), nu = cfg - Leb_window:
// pair sum + (1/2) sum m^2 g(0) - sum m B(x) + (1/2) iint g. Closed-form
// background terms; works for any mass (no neutrality requirement).
EnergyValue kernel_energy(const Configuration& cfg, const Window& window,
                          const Kernel& kernel, Exec exec = Exec::parallel);

// Same energy through the Fourier side, (1/4 pi) int ghat |nu_hat|^2;
// quadrature cross-check oracle for kernel_energy.
EnergyValue kernel_energy_fourier(const Configuration& cfg, const Window& window,
                                  const Kernel& kernel,
                                  const QuadratureSettings& qs = {});

// The long-range Hamiltonian on the box [-n/2, n/2): pair sum, particle-
// background, background-background, all closed form. Atoms must lie in the
// box; total mass != n appends a warning (the Fourier form assumes
// neutrality).
double hamiltonian_pairwise(const Configuration& cfg, const ModelParams& params,
                            Exec exec = Exec::parallel,
                            std::vector<std::string>* warnings = nullptr);

// s = -1 rewriting as displacements from the centered unit lattice
// y_j = j - (n+1)/2: sum (x_(j) - y_j)^2 + n/12. Requires mass n in the box.
double hamiltonian_baxter(const Configuration& cfg, const ModelParams& params);

// Spectral evaluator: (C_s / 4 pi) int |nu_hat|^2 |xi|^{s-1} d xi.
// Requires neutral mass (the integral diverges otherwise). Throws
// QuadratureError if the certified bound misses qs.abs_tol.
EnergyValue hamiltonian_fourier(const Configuration& cfg, const ModelParams& params,
                                const QuadratureSettings& qs = {});

// One inequality of the finite-volume comparison chain.
struct AuditRow {
  std::string name;
  double lhs = 0.0;
  double rhs = 0.0;
  double slack = 0.0;  // rhs - lhs
  bool equality = false;
  bool holds = false;
};

// Named scalars of the chain linking transport cost, the Coulomb energy, its
// frequency splits, the short-range kernel energies, and cell occupancies.
struct EnergyAudit {
  double w2_leb = 0.0;      // squared monotone cost to Lebesgue on the box
  double w2_lattice = 0.0;  // squared monotone cost to the centered unit lattice
  double h_coulomb = 0.0;   // s = -1 Hamiltonian
  double lf2 = 0.0;         // int_{|xi|<=1} |nu_hat|^2 xi^-2
  double hf2 = 0.0;         // int_{|xi|>1}  |nu_hat|^2 xi^-2
  double lf_s = 0.0;        // int_{|xi|<=1} |nu_hat|^2 |xi|^{s-1}
  double hf_exp = 0.0;      // int_{|xi|>1} 2 |nu_hat|^2 / (1+xi^2)
  double h_s = 0.0;         // Hamiltonian at the audit's s
  double h_exp = 0.0;       // exponential-kernel energy
  double h_gauss = 0.0;     // gaussian-kernel energy
  double sum_nj2 = 0.0;     // sum over unit cells of (cell count)^2
  double quad_err = 0.0;    // total certified quadrature error in the splits
  std::vector<AuditRow> rows;
  bool all_hold = false;
};

// Evaluates every scalar and checks each comparison with explicit constants
// (no hidden "up to a constant"). Requires -2 < s <= -1 and neutral mass.
EnergyAudit energy_inequality_audit(const Configuration& cfg,
                                    const ModelParams& params,
                                    const QuadratureSettings& qs = {});

// Batch regressions: w2_leb ~ a1 * h_s + b1 * n and
// h_gauss ~ a2 * sum_nj2 + b2 * n. Only signs/boundedness are meaningful.
struct AuditFit {
  double a_w2_vs_hs = 0.0;
  double b_w2_vs_n = 0.0;
  double a_gauss_vs_nj2 = 0.0;
  double b_gauss_vs_n = 0.0;
};
AuditFit audit_fit(std::span<const EnergyAudit> audits, const ModelParams& params);

}  // namespace rieszlab
