// Serial vs OpenMP timings for the hot kernels, with a cross-check that both
// paths produce the same numbers.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <string>
#include <vector>

#include "qvort/correlation.hpp"
#include "qvort/evolve.hpp"
#include "qvort/fft.hpp"
#include "qvort/flow.hpp"
#include "qvort/parallel.hpp"
#include "qvort/reference.hpp"
#include "qvort/rng.hpp"
#include "qvort/vortex.hpp"

using namespace qvort;

namespace {

double time_ms(const std::function<void()>& fn, int reps) {
  double best = 1e300;
  for (int r = 0; r < reps; ++r) {
    const auto t0 = std::chrono::steady_clock::now();
    fn();
    const auto t1 = std::chrono::steady_clock::now();
    best = std::min(best, std::chrono::duration<double, std::milli>(t1 - t0).count());
  }
  return best;
}

struct Row {
  std::string name;
  double serial_ms = 0.0;
  double parallel_ms = 0.0;
  double max_diff = 0.0;
};

WaveField turbulent_2d(int n) {
  GridSpec g{2, n, 1.0};
  InitialConditionParams p;
  p.dk = 10.0;
  p.s_rms = 5.0;
  p.seed = 1;
  return propagate(random_phase_ic(g, p), 0.01);
}

WaveField turbulent_3d(int n) {
  GridSpec g{3, n, 1.0};
  InitialConditionParams p;
  p.dk = 3.0;
  p.s_rms = 2.0;
  p.seed = 1;
  return propagate(random_phase_ic(g, p), 0.02);
}

}  // namespace

int main() {
  std::vector<Row> rows;
  const int hw_threads = [] {
    set_thread_cap(0);
    return max_threads();
  }();

  // FFT round trip, 512^2.
  {
    const WaveField f = turbulent_2d(512);
    const Fft fft(f.grid);
    auto run = [&] {
      std::vector<cplx> data = f.values;
      fft.forward(data);
      fft.inverse(data);
      return data;
    };
    Row r{"fft_roundtrip_512sq"};
    set_thread_cap(1);
    auto a = run();
    r.serial_ms = time_ms([&] { run(); }, 3);
    set_thread_cap(0);
    auto b = run();
    r.parallel_ms = time_ms([&] { run(); }, 3);
    for (std::size_t i = 0; i < a.size(); ++i)
      r.max_diff = std::max(r.max_diff, std::abs(a[i] - b[i]));
    rows.push_back(r);
  }

  // Exact propagator jump, 512^2.
  {
    const WaveField f = turbulent_2d(512);
    Row r{"propagate_512sq"};
    set_thread_cap(1);
    const WaveField a = propagate(f, 0.5);
    r.serial_ms = time_ms([&] { propagate(f, 0.5); }, 3);
    set_thread_cap(0);
    const WaveField b = propagate(f, 0.5);
    r.parallel_ms = time_ms([&] { propagate(f, 0.5); }, 3);
    for (std::size_t i = 0; i < a.values.size(); ++i)
      r.max_diff = std::max(r.max_diff, std::abs(a.values[i] - b.values[i]));
    rows.push_back(r);
  }

  // Winding scan + subpixel detection, 512^2 turbulent field.
  {
    const WaveField f = turbulent_2d(512);
    Row r{"detect_vortices_512sq"};
    set_thread_cap(1);
    const auto a = detect_vortices_2d(f);
    r.serial_ms = time_ms([&] { detect_vortices_2d(f); }, 3);
    set_thread_cap(0);
    const auto b = detect_vortices_2d(f);
    r.parallel_ms = time_ms([&] { detect_vortices_2d(f); }, 3);
    r.max_diff = std::abs(static_cast<double>(a.size()) - static_cast<double>(b.size()));
    // Also check agreement with the dedicated serial winding scan.
    const auto w = ref::winding_scan_serial(f);
    std::size_t nonzero = 0;
    for (int v : w) nonzero += v != 0;
    r.max_diff = std::max(r.max_diff, std::abs(static_cast<double>(nonzero) -
                                               static_cast<double>(a.size())));
    rows.push_back(r);
  }

  // Shell-averaged spectrum, 512^2.
  {
    const WaveField f = turbulent_2d(512);
    const FlowFields flow = fluid_variables(f);
    Row r{"energy_spectrum_512sq"};
    set_thread_cap(1);
    const Spectrum a = energy_spectrum(flow.v);
    r.serial_ms = time_ms([&] { energy_spectrum(flow.v); }, 3);
    set_thread_cap(0);
    const Spectrum b = energy_spectrum(flow.v);
    r.parallel_ms = time_ms([&] { energy_spectrum(flow.v); }, 3);
    for (int s = 0; s < a.shells(); ++s)
      r.max_diff = std::max(r.max_diff, std::abs(a.energy[s] - b.energy[s]));
    rows.push_back(r);
  }

  // Pair counting, 4096 points.
  {
    const GridSpec g{2, 512, 1.0};
    std::vector<PointVortex> vs(4096);
    for (std::size_t i = 0; i < vs.size(); ++i) {
      vs[i].x = uniform01(splitmix64_at(5, 2 * i));
      vs[i].y = uniform01(splitmix64_at(5, 2 * i + 1));
      vs[i].charge = i % 2 ? 1 : -1;
    }
    const auto edges = log_bins(0.002, 0.5, 64);
    Row r{"pair_count_4096pts"};
    set_thread_cap(1);
    const auto a = point_correlation_2d(vs, g, edges, true);
    r.serial_ms = time_ms([&] { point_correlation_2d(vs, g, edges, true); }, 3);
    set_thread_cap(0);
    const auto b = point_correlation_2d(vs, g, edges, true);
    r.parallel_ms = time_ms([&] { point_correlation_2d(vs, g, edges, true); }, 3);
    for (int s = 0; s < a.bins(); ++s)
      r.max_diff = std::max(r.max_diff, std::abs(a.value[s] - b.value[s]));
    rows.push_back(r);
  }

  // Line tracing, 64^3 turbulent field.
  {
    const WaveField f = turbulent_3d(64);
    Row r{"trace_lines_64cube"};
    set_thread_cap(1);
    const auto a = trace_vortex_lines_3d(f);
    r.serial_ms = time_ms([&] { trace_vortex_lines_3d(f); }, 2);
    set_thread_cap(0);
    const auto b = trace_vortex_lines_3d(f);
    r.parallel_ms = time_ms([&] { trace_vortex_lines_3d(f); }, 2);
    r.max_diff = std::abs(a.total_length - b.total_length);
    rows.push_back(r);
  }

  set_thread_cap(0);
  std::printf("threads: 1 (serial) vs %d (parallel)\n", hw_threads);
  std::printf("%-26s %12s %12s %9s %12s\n", "kernel", "serial_ms", "parallel_ms",
              "speedup", "max_diff");
  for (const auto& r : rows)
    std::printf("%-26s %12.3f %12.3f %8.2fx %12.3e\n", r.name.c_str(), r.serial_ms,
                r.parallel_ms, r.serial_ms / r.parallel_ms, r.max_diff);
  return 0;
}
