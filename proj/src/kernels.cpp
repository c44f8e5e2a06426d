#include "stdgm/kernels.hpp"

#include <cmath>

#include "kernel_detail.hpp"

namespace stdgm {

double reduced_phase(int multiplier, double x) {
  const double m = static_cast<double>(multiplier);
  return std::fma(m, x, -std::nearbyint(m * x));
}

namespace kernels {

void dft_direct(std::span<const PointSample> samples, int components, const FrequencyGrid& grid,
                std::span<cplx> out) {
  const auto G = static_cast<long long>(grid.size());
#pragma omp parallel for schedule(dynamic, 16)
  for (long long g = 0; g < G; ++g)
    detail::dft_direct_point(samples, grid, static_cast<std::size_t>(g), components, out);
}

void dft_separable(std::span<const PointSample> samples, int components, const FrequencyGrid& grid,
                   std::span<cplx> out) {
  const int rows = grid.np();
#pragma omp parallel for schedule(dynamic, 1)
  for (int p = 0; p < rows; ++p) detail::dft_separable_row(samples, grid, p, components, out);
}

void smooth(const FrequencyGrid& grid, int dim, std::span<const cplx> raw, int hp, int hq, int hu,
            std::span<cplx> out, std::span<int> counts) {
  const auto G = static_cast<long long>(grid.size());
  const std::size_t dd = static_cast<std::size_t>(dim) * dim;
#pragma omp parallel for schedule(static)
  for (long long g = 0; g < G; ++g) {
    const auto idx = static_cast<std::size_t>(g);
    counts[idx] = detail::smooth_point(grid, dim, raw, hp, hq, hu, idx, out.data() + idx * dd);
  }
}

}  // namespace kernels
}  // namespace stdgm
