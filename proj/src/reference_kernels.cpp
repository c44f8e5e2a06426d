#include "kernel_detail.hpp"

namespace stdgm::reference {

void dft_direct(std::span<const PointSample> samples, int components, const FrequencyGrid& grid,
                std::span<cplx> out) {
  for (std::size_t g = 0; g < grid.size(); ++g) detail::dft_direct_point(samples, grid, g, components, out);
}

void dft_separable(std::span<const PointSample> samples, int components, const FrequencyGrid& grid,
                   std::span<cplx> out) {
  for (int p = 0; p <= grid.p_max; ++p) detail::dft_separable_row(samples, grid, p, components, out);
}

void smooth(const FrequencyGrid& grid, int dim, std::span<const cplx> raw, int hp, int hq, int hu,
            std::span<cplx> out, std::span<int> counts) {
  const std::size_t dd = static_cast<std::size_t>(dim) * dim;
  for (std::size_t g = 0; g < grid.size(); ++g)
    counts[g] = detail::smooth_point(grid, dim, raw, hp, hq, hu, g, out.data() + g * dd);
}

}  // namespace stdgm::reference
