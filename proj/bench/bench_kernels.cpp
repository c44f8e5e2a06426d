// Serial reference loops against the OpenMP kernels on the default grid.
// Usage: bench_kernels [events_total] [components] [repeats]

#include <omp.h>

#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <functional>
#include <string>

#include "stdgm/kernels.hpp"
#include "stdgm/partial.hpp"
#include "stdgm/simulate.hpp"
#include "stdgm/spectra.hpp"

namespace {

double best_of(int repeats, const std::function<void()>& body) {
  double best = 1e300;
  for (int r = 0; r < repeats; ++r) {
    const auto t0 = std::chrono::steady_clock::now();
    body();
    const std::chrono::duration<double> dt = std::chrono::steady_clock::now() - t0;
    best = std::min(best, dt.count());
  }
  return best;
}

double max_diff(const std::vector<stdgm::cplx>& a, const std::vector<stdgm::cplx>& b) {
  double m = 0.0;
  for (std::size_t k = 0; k < a.size(); ++k) m = std::max(m, std::abs(a[k] - b[k]));
  return m;
}

void row(const char* name, double serial, double parallel, double diff) {
  std::printf("%-16s %12.4f %12.4f %9.2fx %12.3g\n", name, serial, parallel, serial / parallel, diff);
}

}  // namespace

int main(int argc, char** argv) {
  const long total = argc > 1 ? std::atol(argv[1]) : 100000;
  const int d = argc > 2 ? std::atoi(argv[2]) : 5;
  const int repeats = argc > 3 ? std::atoi(argv[3]) : 3;
  const int T = 4;

  stdgm::SimSpec spec;
  spec.components = d;
  spec.steps = T;
  spec.rates.assign(static_cast<std::size_t>(d), static_cast<double>(total) / (d * T));
  spec.seed = 7;
  const auto pattern = stdgm::simulate(spec).pattern;
  const auto grid = stdgm::FrequencyGrid::defaults(T);
  const auto samples = stdgm::prepare_samples(pattern, false);
  const std::size_t G = grid.size();

  std::printf("events=%zu components=%d grid=%zu threads=%d\n", pattern.size(), d, G, omp_get_max_threads());
  std::printf("%-16s %12s %12s %10s %12s\n", "kernel", "serial [s]", "parallel [s]", "speedup", "max |diff|");

  std::vector<stdgm::cplx> ref(static_cast<std::size_t>(d) * G), par(ref.size());
  double s = best_of(repeats, [&] { stdgm::reference::dft_direct(samples, d, grid, ref); });
  double p = best_of(repeats, [&] { stdgm::kernels::dft_direct(samples, d, grid, par); });
  row("dft_direct", s, p, max_diff(ref, par));

  s = best_of(repeats, [&] { stdgm::reference::dft_separable(samples, d, grid, ref); });
  p = best_of(repeats, [&] { stdgm::kernels::dft_separable(samples, d, grid, par); });
  row("dft_separable", s, p, max_diff(ref, par));

  const auto raw = stdgm::periodogram_matrix(stdgm::dft_separable(pattern, grid));
  std::vector<stdgm::cplx> sm_ref(raw.values.size()), sm_par(raw.values.size());
  std::vector<int> counts(G);
  s = best_of(repeats, [&] { stdgm::reference::smooth(grid, d, raw.values, 3, 3, 0, sm_ref, counts); });
  p = best_of(repeats, [&] { stdgm::kernels::smooth(grid, d, raw.values, 3, 3, 0, sm_par, counts); });
  row("smooth", s, p, max_diff(sm_ref, sm_par));

  const auto smoothed = stdgm::smooth_spectra(raw, {3, 3, 0});
  stdgm::InverseField inv_ref, inv_par;
  s = best_of(repeats, [&] { inv_ref = stdgm::reference::invert_spectral_matrix(smoothed); });
  p = best_of(repeats, [&] { inv_par = stdgm::invert_spectral_matrix(smoothed); });
  row("invert", s, p, max_diff(inv_ref.values, inv_par.values));
  return 0;
}
