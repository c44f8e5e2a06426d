#pragma once

#include <span>
#include <vector>

#include "stdgm/frequency_grid.hpp"

namespace stdgm {

/// Radial or angular averages of a real field over spatial frequency (p, q),
/// one row per temporal frequency u. Empty bins hold value 0 with count 0.
struct PolarSpectrum {
  enum class Kind { radial, angular };
  Kind kind = Kind::radial;
  std::vector<double> abscissa;  // radii 1, 2, ... or angles 0, 10, ..., 170 (degrees)
  std::vector<int> u_values;
  std::vector<std::vector<double>> values;  // [u index][bin]
  std::vector<std::vector<int>> counts;     // [u index][bin]
};

/// Bin r collects ordinates with r - 1 < sqrt(p^2 + q^2) <= r; the origin p = q = 0 is not binned.
PolarSpectrum r_spectrum(const FrequencyGrid& grid, std::span<const double> field);

/// Band theta collects ordinates whose direction atan2(p, q) mod 180 degrees lies in
/// (theta - 5, theta + 5], for theta = 0, 10, ..., 170.
PolarSpectrum theta_spectrum(const FrequencyGrid& grid, std::span<const double> field);

/// Band index in 0..17 for a spatial frequency (p, q) != (0, 0).
int theta_band(int p, int q);
/// Radius bin (1-based) for a spatial frequency (p, q) != (0, 0).
int radius_bin(int p, int q);

}  // namespace stdgm
