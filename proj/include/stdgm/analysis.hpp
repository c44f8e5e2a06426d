#pragma once

#include <optional>
#include <string>

#include "stdgm/partial.hpp"
#include "stdgm/pattern.hpp"
#include "stdgm/spectra.hpp"

namespace stdgm {

/// User overrides for the frequency lattice; unset fields take the defaults for T.
struct GridSpec {
  std::optional<int> p_max;
  std::optional<int> q_min;
  std::optional<int> q_max;
  std::optional<int> u_min;
  std::optional<int> u_max;
  bool include_dc = false;

  /// Defaults for T, with the u bounds clipped to the admissible range when the
  /// overrides exceed it (this matters for T = 1 slices).
  FrequencyGrid resolve(int steps) const;
};

struct AnalysisOptions {
  GridSpec grid;
  std::optional<SmoothingWidths> widths;  // defaults for T when unset
  bool marked = false;
  bool separable = true;  // factorised transform (identical values to the direct sum)
  RidgePolicy ridge;
};

/// The spectral chain from a unit-square pattern to partial statistics.
struct Analysis {
  DftField dft;
  SpectralField raw;
  SpectralField smoothed;
  PartialField partial;
};

/// Throws a contract error for d < 3, since partial statistics need a conditioning set.
Analysis analyse(const MultiPattern& pattern, const AnalysisOptions& options);

/// Largest |d_ij| over pairs and statistic-bearing grid points.
double max_abs_d(const PartialField& partial);

}  // namespace stdgm
