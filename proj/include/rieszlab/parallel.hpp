#pragma once

#include <cstddef>
#include <exception>
#include <vector>

namespace rieszlab {

// Execution mode for the hot kernels. The parallel path chunks work at fixed
// boundaries and reduces partials in index order, so serial and parallel
// results are bit-identical and independent of the thread count.
enum class Exec { serial, parallel };

// Threads actually used by the parallel path: min(hardware, OMP settings,
// RIESZLAB_THREADS if set).
int effective_threads();

// Apply RIESZLAB_THREADS (if present) to the OpenMP runtime. Called once by
// the CLI; harmless elsewhere.
void apply_thread_env();

namespace detail {
inline constexpr std::size_t kChunk = 256;
}

// Deterministic chunked map-reduce: partials[c] = sum of f(i) over chunk c,
// filled in parallel, then summed in chunk order.
template <typename F>
double chunked_sum(std::size_t count, Exec exec, F&& f) {
  const std::size_t nchunks = (count + detail::kChunk - 1) / detail::kChunk;
  std::vector<double> partials(nchunks, 0.0);
  if (exec == Exec::parallel) {
    std::exception_ptr eptr = nullptr;
#pragma omp parallel for schedule(static)
    for (long long c = 0; c < static_cast<long long>(nchunks); ++c) {
      try {
        const std::size_t lo = static_cast<std::size_t>(c) * detail::kChunk;
        const std::size_t hi = std::min(lo + detail::kChunk, count);
        double acc = 0.0;
        for (std::size_t i = lo; i < hi; ++i) acc += f(i);
        partials[static_cast<std::size_t>(c)] = acc;
      } catch (...) {
#pragma omp critical
        if (eptr == nullptr) eptr = std::current_exception();
      }
    }
    if (eptr != nullptr) std::rethrow_exception(eptr);
  } else {
    for (std::size_t c = 0; c < nchunks; ++c) {
      const std::size_t lo = c * detail::kChunk;
      const std::size_t hi = std::min(lo + detail::kChunk, count);
      double acc = 0.0;
      for (std::size_t i = lo; i < hi; ++i) acc += f(i);
      partials[c] = acc;
    }
  }
  double total = 0.0;
  for (double p : partials) total += p;
  return total;
}

// Parallel map over independent items; results land at their index, so the
// output does not depend on scheduling.
template <typename T, typename F>
std::vector<T> indexed_map(std::size_t count, Exec exec, F&& f) {
  std::vector<T> out(count);
  if (exec == Exec::parallel) {
    std::exception_ptr eptr = nullptr;
#pragma omp parallel for schedule(dynamic)
    for (long long i = 0; i < static_cast<long long>(count); ++i) {
      try {
        out[static_cast<std::size_t>(i)] = f(static_cast<std::size_t>(i));
      } catch (...) {
#pragma omp critical
        if (eptr == nullptr) eptr = std::current_exception();
      }
    }
    if (eptr != nullptr) std::rethrow_exception(eptr);
  } else {
    for (std::size_t i = 0; i < count; ++i) out[i] = f(i);
  }
  return out;
}

}  // namespace rieszlab
