#include "stdgm/inverse.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>

#include "stdgm/error.hpp"
#include "stdgm/partial.hpp"

namespace stdgm {

namespace {

int wrap(int v, int lo, int n) { return lo + (((v - lo) % n) + n) % n; }

void require_mirrorable(const FrequencyGrid& grid) {
  if (grid.q_min != -grid.q_max)
    throw Error(ErrorKind::symmetry, "inverse transform needs a symmetric q range (q_min = -q_max)");
  if (!grid.full_temporal_period())
    throw Error(ErrorKind::symmetry, "inverse transform needs u to cover one full temporal period");
}

// In-place length-n DFT along one axis of a 3-D array with dims {n0, n1, n2}.
// Frequencies and lags share the index offset, so k = idx + offset on both sides.
void dft_axis(std::vector<cplx>& data, const std::array<int, 3>& dims, int axis, int offset, int sign) {
  const int n = dims[static_cast<std::size_t>(axis)];
  std::vector<cplx> twiddle(static_cast<std::size_t>(n) * n);
  for (int k = 0; k < n; ++k)
    for (int l = 0; l < n; ++l) {
      const long long m = ((static_cast<long long>(k + offset) * (l + offset)) % n + n) % n;
      const double angle = sign * 2.0 * std::numbers::pi * static_cast<double>(m) / n;
      twiddle[static_cast<std::size_t>(k) * n + l] = {std::cos(angle), std::sin(angle)};
    }
  std::array<std::size_t, 3> stride{static_cast<std::size_t>(dims[1]) * dims[2], static_cast<std::size_t>(dims[2]), 1};
  const std::size_t s = stride[static_cast<std::size_t>(axis)];
  const int o1 = axis == 0 ? 1 : 0;
  const int o2 = axis == 2 ? 1 : 2;
  const int n1 = dims[static_cast<std::size_t>(o1)], n2 = dims[static_cast<std::size_t>(o2)];
#pragma omp parallel for schedule(static)
  for (int line = 0; line < n1 * n2; ++line) {
    const std::size_t base = static_cast<std::size_t>(line / n2) * stride[static_cast<std::size_t>(o1)] +
                             static_cast<std::size_t>(line % n2) * stride[static_cast<std::size_t>(o2)];
    std::vector<cplx> in(static_cast<std::size_t>(n));
    for (int k = 0; k < n; ++k) in[static_cast<std::size_t>(k)] = data[base + static_cast<std::size_t>(k) * s];
    for (int l = 0; l < n; ++l) {
      cplx acc{};
      for (int k = 0; k < n; ++k) acc += in[static_cast<std::size_t>(k)] * twiddle[static_cast<std::size_t>(k) * n + l];
      data[base + static_cast<std::size_t>(l) * s] = acc;
    }
  }
}

}  // namespace

LagGrid LagGrid::conjugate_to(const FrequencyGrid& grid) {
  require_mirrorable(grid);
  return LagGrid{grid.p_max, grid.q_max, grid.u_min, grid.steps};
}

void LagGrid::lag(std::size_t index, int& a, int& b, int& h) const {
  h = static_cast<int>(index % static_cast<std::size_t>(steps)) + h_min;
  index /= static_cast<std::size_t>(steps);
  b = static_cast<int>(index % static_cast<std::size_t>(nb())) - Q;
  a = static_cast<int>(index / static_cast<std::size_t>(nb())) - P;
}

SymmetricSpectrum symmetrise(const FrequencyGrid& grid, std::span<const cplx> half) {
  require_mirrorable(grid);
  if (half.size() != grid.size()) throw Error(ErrorKind::parameter, "spectrum size does not match the frequency grid");
  SymmetricSpectrum s{grid.p_max, grid.q_max, grid.u_min, grid.steps, {}};
  s.values.assign(s.size(), cplx{});
  double largest = 0.0;
  for (const cplx& v : half) largest = std::max(largest, std::abs(v));
  const double tolerance = 1e-9 * largest;
  for (int p = -s.P; p <= s.P; ++p)
    for (int q = -s.Q; q <= s.Q; ++q)
      for (int u = grid.u_min; u <= grid.u_max; ++u) {
        cplx v;
        if (p >= 0) {
          v = half[grid.index(p, q, u)];
        } else {
          v = std::conj(half[grid.index(-p, -q, wrap(-u, grid.u_min, grid.steps))]);
        }
        if (p == 0) {
          const cplx mirror = std::conj(half[grid.index(0, -q, wrap(-u, grid.u_min, grid.steps))]);
          if (std::abs(v - mirror) > tolerance)
            throw Error(ErrorKind::symmetry, "spectrum violates f(-w) = conj f(w) on the p = 0 plane at (0," +
                                                 std::to_string(q) + "," + std::to_string(u) + ")");
        }
        s.values[s.index(p, q, u)] = v;
      }
  return s;
}

std::vector<cplx> inverse_sum(const SymmetricSpectrum& spectrum) {
  std::vector<cplx> data = spectrum.values;
  const std::array<int, 3> dims{spectrum.np(), spectrum.nq(), spectrum.steps};
  dft_axis(data, dims, 2, spectrum.u_min, +1);
  dft_axis(data, dims, 1, -spectrum.Q, +1);
  dft_axis(data, dims, 0, -spectrum.P, +1);
  const double n = static_cast<double>(spectrum.size());
  for (auto& v : data) v /= n;
  return data;
}

SymmetricSpectrum forward_sum(const LagGrid& lags, std::span<const cplx> values) {
  if (values.size() != lags.size()) throw Error(ErrorKind::parameter, "lag values do not match the lag grid");
  SymmetricSpectrum s{lags.P, lags.Q, lags.h_min, lags.steps, {values.begin(), values.end()}};
  const std::array<int, 3> dims{s.np(), s.nq(), s.steps};
  dft_axis(s.values, dims, 2, lags.h_min, -1);
  dft_axis(s.values, dims, 1, -lags.Q, -1);
  dft_axis(s.values, dims, 0, -lags.P, -1);
  return s;
}

std::string to_string(LagKind kind) {
  switch (kind) {
    case LagKind::complete_auto: return "complete_auto";
    case LagKind::complete_cross: return "complete_cross";
    case LagKind::partial_auto: return "partial_auto";
    case LagKind::partial_cross: return "partial_cross";
    case LagKind::scaled: return "scaled";
  }
  return "unknown";
}

LagSeries inverse_entry(const FrequencyGrid& grid, std::span<const cplx> half, int i, int j) {
  const SymmetricSpectrum s = symmetrise(grid, half);
  const std::vector<cplx> lag = inverse_sum(s);
  double largest = 0.0;
  for (const cplx& v : half) largest = std::max(largest, std::abs(v));
  LagSeries out;
  out.i = i;
  out.j = j;
  out.values.resize(lag.size());
  for (std::size_t k = 0; k < lag.size(); ++k) {
    out.values[k] = lag[k].real();
    out.imag_residue = std::max(out.imag_residue, std::abs(lag[k].imag()));
  }
  if (out.imag_residue > 1e-9 * largest)
    throw Error(ErrorKind::symmetry, "inverse transform left an imaginary residue of " + std::to_string(out.imag_residue));
  const LagGrid grid_lags = LagGrid::conjugate_to(grid);
  out.zero_lag = out.values[grid_lags.index(0, 0, 0)];
  return out;
}

CompleteCovariance inverse_transform(const SpectralField& field) {
  const LagGrid lags = LagGrid::conjugate_to(field.grid);
  CompleteCovariance out{{lags, LagKind::complete_auto, {}, ""}, {lags, LagKind::complete_cross, {}, ""}};
  for (int i = 0; i < field.dim; ++i)
    for (int j = i; j < field.dim; ++j) {
      const auto entry = field.entry(i, j);
      (i == j ? out.auto_terms : out.cross_terms).series.push_back(inverse_entry(field.grid, entry, i, j));
    }
  return out;
}

PartialLag partial_lag_characteristics(const SpectralField& field, int i, int j,
                                       const std::vector<int>& auto_conditioning) {
  const LagGrid lags = LagGrid::conjugate_to(field.grid);
  std::vector<int> rest;
  for (int k = 0; k < field.dim; ++k)
    if (k != i && k != j) rest.push_back(k);
  auto describe = [](const std::vector<int>& set) {
    std::string s = "{";
    for (std::size_t k = 0; k < set.size(); ++k) s += (k ? "," : "") + std::to_string(set[k] + 1);
    return s + "}";
  };
  PartialLag out{{lags, LagKind::partial_auto, {}, describe(auto_conditioning)},
                 {lags, LagKind::partial_cross, {}, describe(rest)}};
  out.partial_auto.series.push_back(
      inverse_entry(field.grid, partial_spectrum_direct(field, i, i, auto_conditioning), i, i));
  out.partial_cross.series.push_back(inverse_entry(field.grid, partial_spectrum_direct(field, i, j, rest), i, j));
  return out;
}

LagField scaled_covariance(const LagField& field, std::span<const double> intensities) {
  LagField out = field;
  out.kind = LagKind::scaled;
  for (auto& s : out.series) {
    const auto li = static_cast<std::size_t>(s.i), lj = static_cast<std::size_t>(s.j);
    if (li >= intensities.size() || lj >= intensities.size())
      throw Error(ErrorKind::parameter, "missing plug-in intensity for a component");
    const double a = intensities[li], b = intensities[lj];
    if (!(a > 0.0 && b > 0.0)) throw Error(ErrorKind::parameter, "plug-in intensities must be positive");
    const double denom = std::sqrt(a * b);
    for (auto& v : s.values) v /= denom;
    s.zero_lag /= denom;
    s.imag_residue /= denom;
  }
  return out;
}

}  // namespace stdgm
