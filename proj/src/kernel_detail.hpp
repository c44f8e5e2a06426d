#pragma once

// Per-output arithmetic shared by the parallel kernels and the serial
// references, so both produce bit-identical values.

#include <cmath>
#include <numbers>
#include <span>
#include <vector>

#include "stdgm/kernels.hpp"

namespace stdgm::detail {

inline constexpr double kTwoPi = 2.0 * std::numbers::pi;

/// (u * t mod T) / T reduced to [-0.5, 0.5].
inline double temporal_phase(int u, int t, int steps) {
  const long long m = ((static_cast<long long>(u) * t) % steps + steps) % steps;
  double f = static_cast<double>(m) / steps;
  if (f > 0.5) f -= 1.0;
  return f;
}

inline cplx unit_phasor(double fraction) {
  const double angle = -kTwoPi * fraction;
  return {std::cos(angle), std::sin(angle)};
}

inline void dft_direct_point(std::span<const PointSample> samples, const FrequencyGrid& grid, std::size_t g,
                             int components, std::span<cplx> out) {
  const FrequencyPoint w = grid.point(g);
  const std::size_t G = grid.size();
  std::vector<cplx> acc(static_cast<std::size_t>(components), cplx{});
  for (const auto& s : samples) {
    double f = reduced_phase(w.p, s.x) + reduced_phase(w.q, s.y) + temporal_phase(w.u, s.step, grid.steps);
    f -= std::nearbyint(f);
    acc[static_cast<std::size_t>(s.component)] += s.weight * unit_phasor(f);
  }
  for (int c = 0; c < components; ++c) out[static_cast<std::size_t>(c) * G + g] = acc[static_cast<std::size_t>(c)];
}

/// Computes every (q, u) ordinate of spatial frequency row p.
inline void dft_separable_row(std::span<const PointSample> samples, const FrequencyGrid& grid, int p,
                              int components, std::span<cplx> out) {
  const int T = grid.steps;
  const int nq = grid.nq();
  const std::size_t G = grid.size();
  // spatial[(c * T + (t-1)) * nq + (q - q_min)]
  std::vector<cplx> spatial(static_cast<std::size_t>(components) * T * nq, cplx{});
  for (const auto& s : samples) {
    const cplx ex = s.weight * unit_phasor(reduced_phase(p, s.x));
    const cplx step = unit_phasor(reduced_phase(1, s.y));
    cplx ey = unit_phasor(reduced_phase(grid.q_min, s.y));
    cplx* row = spatial.data() + (static_cast<std::size_t>(s.component) * T + (s.step - 1)) * nq;
    for (int k = 0; k < nq; ++k) {
      row[k] += ex * ey;
      ey *= step;
    }
  }
  std::vector<cplx> twiddle(static_cast<std::size_t>(grid.nu()) * T);
  for (int u = grid.u_min; u <= grid.u_max; ++u)
    for (int t = 1; t <= T; ++t)
      twiddle[static_cast<std::size_t>(u - grid.u_min) * T + (t - 1)] = unit_phasor(temporal_phase(u, t, T));
  for (int c = 0; c < components; ++c)
    for (int q = grid.q_min; q <= grid.q_max; ++q)
      for (int u = grid.u_min; u <= grid.u_max; ++u) {
        cplx sum{};
        for (int t = 1; t <= T; ++t)
          sum += twiddle[static_cast<std::size_t>(u - grid.u_min) * T + (t - 1)] *
                 spatial[(static_cast<std::size_t>(c) * T + (t - 1)) * nq + (q - grid.q_min)];
        out[static_cast<std::size_t>(c) * G + grid.index(p, q, u)] = sum;
      }
}

/// Daniell average at one grid point; returns the member count.
inline int smooth_point(const FrequencyGrid& grid, int dim, std::span<const cplx> raw, int hp, int hq, int hu,
                        std::size_t g, cplx* out) {
  const std::size_t dd = static_cast<std::size_t>(dim) * dim;
  const FrequencyPoint w = grid.point(g);
  const bool wrap_u = grid.full_temporal_period();
  const auto dc = grid.dc_index();
  const bool skip_dc = !grid.include_dc && dc.has_value();
  std::vector<cplx> acc(dd, cplx{});
  int count = 0;
  for (int dp = -hp; dp <= hp; ++dp)
    for (int dq = -hq; dq <= hq; ++dq)
      for (int du = -hu; du <= hu; ++du) {
        int p = w.p + dp, q = w.q + dq, u = w.u + du;
        bool mirrored = false;
        if (p < 0) {
          p = -p;
          q = -q;
          u = -u;
          mirrored = true;
        }
        if (wrap_u) u = grid.u_min + (((u - grid.u_min) % grid.steps) + grid.steps) % grid.steps;
        if (!grid.contains(p, q, u)) continue;
        const std::size_t n = grid.index(p, q, u);
        if (skip_dc && n == *dc) continue;
        const cplx* m = raw.data() + n * dd;
        for (int i = 0; i < dim; ++i)
          for (int j = i; j < dim; ++j) {
            const cplx v = m[static_cast<std::size_t>(i) * dim + j];
            acc[static_cast<std::size_t>(i) * dim + j] += mirrored ? std::conj(v) : v;
          }
        ++count;
      }
  if (count == 0) {
    // Only the excluded DC ordinate itself was in range; keep it as is.
    const cplx* m = raw.data() + g * dd;
    for (std::size_t k = 0; k < dd; ++k) out[k] = m[k];
    return 1;
  }
  for (int i = 0; i < dim; ++i) {
    const double diag = acc[static_cast<std::size_t>(i) * dim + i].real() / count;
    out[static_cast<std::size_t>(i) * dim + i] = {diag, 0.0};
    for (int j = i + 1; j < dim; ++j) {
      const cplx v = acc[static_cast<std::size_t>(i) * dim + j] / static_cast<double>(count);
      out[static_cast<std::size_t>(i) * dim + j] = v;
      out[static_cast<std::size_t>(j) * dim + i] = std::conj(v);
    }
  }
  return count;
}

}  // namespace stdgm::detail
