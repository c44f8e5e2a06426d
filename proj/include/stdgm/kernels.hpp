#pragma once

// Data-parallel kernels behind the spectral pipeline. Each kernel in
// stdgm::kernels is OpenMP-parallel with a fixed per-output evaluation order, so
// its result does not depend on the thread count; stdgm::reference holds the
// plain serial loops the tests and the benchmark compare against.

#include <complex>
#include <span>
#include <vector>

#include "stdgm/frequency_grid.hpp"

namespace stdgm {

/// One event prepared for the transform: unit-square location, 1-based step,
/// summand weight (1, or the centred mark), and component index.
struct PointSample {
  double x = 0.0;
  double y = 0.0;
  int step = 1;
  double weight = 1.0;
  int component = 0;
};

/// Fractional part of p*x reduced to [-0.5, 0.5], exact up to one rounding.
double reduced_phase(int multiplier, double x);

namespace kernels {

/// out[c * grid.size() + g] = sum over samples of component c of
/// weight * exp(-2πi (p x + q y + u t / T)), one sincos per term.
void dft_direct(std::span<const PointSample> samples, int components, const FrequencyGrid& grid,
                std::span<cplx> out);

/// Same sums in factorised order: per-step spatial transforms combined with the
/// temporal phase. Spatial phases along q are advanced by recurrence.
void dft_separable(std::span<const PointSample> samples, int components, const FrequencyGrid& grid,
                   std::span<cplx> out);

/// Daniell average of a d x d Hermitian field over the (2h+1)^3 box. Neighbours
/// with p < 0 are read from the mirrored ordinate (conjugated), u wraps when the
/// grid spans one temporal period, other out-of-grid neighbours are dropped, and
/// the DC ordinate is excluded unless the grid includes it. `counts[g]` receives
/// the number of ordinates averaged at g.
void smooth(const FrequencyGrid& grid, int dim, std::span<const cplx> raw, int hp, int hq, int hu,
            std::span<cplx> out, std::span<int> counts);

}  // namespace kernels

namespace reference {

void dft_direct(std::span<const PointSample> samples, int components, const FrequencyGrid& grid,
                std::span<cplx> out);
void dft_separable(std::span<const PointSample> samples, int components, const FrequencyGrid& grid,
                   std::span<cplx> out);
void smooth(const FrequencyGrid& grid, int dim, std::span<const cplx> raw, int hp, int hq, int hu,
            std::span<cplx> out, std::span<int> counts);

}  // namespace reference

}  // namespace stdgm
