#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace qvort {

// Thread count for internal parallel regions. Respects the QVORT_THREADS
// environment variable and set_thread_cap(); never exceeds the OpenMP limit.
int max_threads();

// Runtime override (used by the benchmark to time serial vs parallel runs).
// cap <= 0 restores the default behaviour.
void set_thread_cap(int cap);

// Deterministic sum: values are combined in fixed 4096-element blocks and the
// per-block partials are added in block order, so the result is bit-identical
// for any thread count or schedule.
template <class F>
double block_sum_indexed(std::size_t count, F&& f) {
  constexpr std::size_t kBlock = 4096;
  const std::size_t nblocks = (count + kBlock - 1) / kBlock;
  std::vector<double> partial(nblocks, 0.0);
#pragma omp parallel for schedule(static) num_threads(qvort::max_threads())
  for (std::ptrdiff_t b = 0; b < static_cast<std::ptrdiff_t>(nblocks); ++b) {
    const std::size_t lo = static_cast<std::size_t>(b) * kBlock;
    const std::size_t hi = lo + kBlock < count ? lo + kBlock : count;
    double s = 0.0;
    for (std::size_t i = lo; i < hi; ++i) s += f(i);
    partial[static_cast<std::size_t>(b)] = s;
  }
  double total = 0.0;
  for (double p : partial) total += p;
  return total;
}

inline double block_sum(std::span<const double> values) {
  return block_sum_indexed(values.size(), [&](std::size_t i) { return values[i]; });
}

}  // namespace qvort
