// Timing comparison of the serial reference paths against the OpenMP ones.
// Usage: bench_kernels [n] [reps]

#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <string>
#include <vector>

#include "rieszlab/energy.hpp"
#include "rieszlab/kernels.hpp"
#include "rieszlab/parallel.hpp"
#include "rieszlab/sampler.hpp"

using namespace rieszlab;

namespace {

double now_s() {
  return std::chrono::duration<double>(
             std::chrono::steady_clock::now().time_since_epoch())
      .count();
}

template <class F>
double time_best(int reps, F&& f) {
  double best = 1e300;
  for (int r = 0; r < reps; ++r) {
    double t0 = now_s();
    f();
    best = std::min(best, now_s() - t0);
  }
  return best;
}

}  // namespace

int main(int argc, char** argv) {
  apply_thread_env();
  int n = argc > 1 ? std::atoi(argv[1]) : 2000;
  int reps = argc > 2 ? std::atoi(argv[2]) : 3;

  ModelParams params(-1.0, 1.0, n);
  RandomStream rs(42);
  std::vector<double> xs(static_cast<std::size_t>(n));
  for (auto& x : xs) x = rs.uniform(params.box().left, params.box().right);
  Configuration cfg = Configuration::from_positions(xs, params.box());

  std::printf("threads: %d, n: %d, reps: %d (best-of shown)\n",
              effective_threads(), n, reps);
  std::printf("%-28s %12s %12s %8s %s\n", "kernel", "serial [s]", "parallel [s]",
              "speedup", "bitwise");

  Kernel coulomb = Kernel::riesz(-1.0);
  double v_serial = 0.0, v_par = 0.0;
  double ts = time_best(reps, [&] {
    v_serial = pair_interaction_sum(cfg, coulomb, Exec::serial);
  });
  double tp = time_best(reps, [&] {
    v_par = pair_interaction_sum(cfg, coulomb, Exec::parallel);
  });
  std::printf("%-28s %12.4f %12.4f %8.2f %s\n", "pair interaction sum", ts, tp,
              ts / tp, v_serial == v_par ? "equal" : "DIFFER");

  Kernel expk = Kernel::exponential();
  EnergyValue e_serial, e_par;
  ts = time_best(reps, [&] {
    e_serial = kernel_energy(cfg, *cfg.window(), expk, Exec::serial);
  });
  tp = time_best(reps, [&] {
    e_par = kernel_energy(cfg, *cfg.window(), expk, Exec::parallel);
  });
  std::printf("%-28s %12.4f %12.4f %8.2f %s\n", "exp kernel energy", ts, tp,
              ts / tp, e_serial.value == e_par.value ? "equal" : "DIFFER");

  ts = time_best(reps, [&] {
    double h = hamiltonian_pairwise(cfg, params, Exec::serial);
    (void)h;
  });
  tp = time_best(reps, [&] {
    double h = hamiltonian_pairwise(cfg, params, Exec::parallel);
    (void)h;
  });
  std::printf("%-28s %12.4f %12.4f %8.2f %s\n", "coulomb hamiltonian", ts, tp,
              ts / tp, "-");

  ModelParams small(-1.0, 1.0, 64);
  McmcOptions opt;
  opt.steps = 20000;
  opt.burn_in = 2000;
  opt.thin = 200;
  int chains = 4;
  RandomStream crs(7);
  ts = time_best(1, [&] {
    mcmc_sample_chains(small, opt, chains, crs, nullptr, Exec::serial);
  });
  tp = time_best(1, [&] {
    mcmc_sample_chains(small, opt, chains, crs, nullptr, Exec::parallel);
  });
  std::printf("%-28s %12.4f %12.4f %8.2f %s\n", "mcmc chains (n=64, 4x)", ts, tp,
              ts / tp, "-");

  return 0;
}
