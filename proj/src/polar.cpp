#include "stdgm/polar.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <numbers>

#include "stdgm/error.hpp"

namespace stdgm {

int radius_bin(int p, int q) { return static_cast<int>(std::ceil(std::sqrt(static_cast<double>(p * p + q * q)))); }

int theta_band(int p, int q) {
  double deg = std::atan2(static_cast<double>(p), static_cast<double>(q)) * 180.0 / std::numbers::pi;
  deg = std::fmod(deg + 360.0, 180.0);
  // Snap to 1e-9 degrees so band edges such as p = q land deterministically.
  deg = std::round(deg * 1e9) / 1e9;
  const int band = static_cast<int>(std::ceil((deg - 5.0) / 10.0));
  return ((band % 18) + 18) % 18;
}

namespace {

template <typename BinOf>
PolarSpectrum polar(const FrequencyGrid& grid, std::span<const double> field, PolarSpectrum::Kind kind, int bins,
                    BinOf bin_of) {
  if (field.size() != grid.size()) throw Error(ErrorKind::parameter, "field size does not match the frequency grid");
  PolarSpectrum out;
  out.kind = kind;
  for (int b = 0; b < bins; ++b)
    out.abscissa.push_back(kind == PolarSpectrum::Kind::radial ? b + 1.0 : 10.0 * b);
  for (int u = grid.u_min; u <= grid.u_max; ++u) out.u_values.push_back(u);
  out.values.assign(out.u_values.size(), std::vector<double>(static_cast<std::size_t>(bins), 0.0));
  out.counts.assign(out.u_values.size(), std::vector<int>(static_cast<std::size_t>(bins), 0));
  for (std::size_t g = 0; g < grid.size(); ++g) {
    const FrequencyPoint w = grid.point(g);
    if (w.p == 0 && w.q == 0) continue;
    const auto row = static_cast<std::size_t>(w.u - grid.u_min);
    const auto b = static_cast<std::size_t>(bin_of(w.p, w.q));
    out.values[row][b] += field[g];
    ++out.counts[row][b];
  }
  for (std::size_t r = 0; r < out.values.size(); ++r)
    for (std::size_t b = 0; b < out.values[r].size(); ++b)
      if (out.counts[r][b] > 0) out.values[r][b] /= out.counts[r][b];
  return out;
}

}  // namespace

PolarSpectrum r_spectrum(const FrequencyGrid& grid, std::span<const double> field) {
  const int qa = std::max(std::abs(grid.q_min), std::abs(grid.q_max));
  const int bins = std::max(1, radius_bin(grid.p_max, qa));
  return polar(grid, field, PolarSpectrum::Kind::radial, bins, [](int p, int q) { return radius_bin(p, q) - 1; });
}

PolarSpectrum theta_spectrum(const FrequencyGrid& grid, std::span<const double> field) {
  return polar(grid, field, PolarSpectrum::Kind::angular, 18, theta_band);
}

}  // namespace stdgm
