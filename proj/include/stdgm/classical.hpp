#pragma once

// Space-time domain estimators on unit-square coordinates with discrete time
// steps. An event recorded at step k is treated as occurring uniformly within
// (k-1, k], so temporal lags between two events are k + D with D triangular on
// (-1, 1); indicator and kernel terms are averaged over D.

#include <functional>
#include <string>
#include <vector>

#include "stdgm/pattern.hpp"

namespace stdgm {

struct IntensitySurface {
  int cells = 0;
  double cell_size = 0.0;
  double bandwidth = 0.0;
  std::vector<double> values;  // [iy * cells + ix], events per unit area over the whole period

  double at(int ix, int iy) const { return values[static_cast<std::size_t>(iy) * cells + ix]; }
  /// Value of the cell containing (x, y).
  double lookup(double x, double y) const;
  /// Riemann sum over the window.
  double integral() const;
};

/// Gaussian kernel with the Diggle correction c(s_i; W) evaluated on the same
/// cell grid, so the Riemann sum of the surface equals n. `types` restricts the
/// events used (empty = all).
IntensitySurface estimate_spatial_intensity(const MultiPattern& pattern, double bandwidth, int cells = 64,
                                            const std::vector<int>& types = {});

/// Events per step at t = 1..T, Gaussian kernel with edge correction over the steps.
std::vector<double> estimate_temporal_intensity(const MultiPattern& pattern, double bandwidth,
                                                const std::vector<int>& types = {});

/// Intensity over (cell, step): values[(t - 1) * cells^2 + iy * cells + ix].
struct SpaceTimeIntensity {
  int cells = 0;
  int steps = 0;
  std::vector<double> values;

  double at(int ix, int iy, int t) const {
    return values[(static_cast<std::size_t>(t - 1) * cells + iy) * cells + ix];
  }
  double lookup(double x, double y, int t) const;
  /// Riemann sum over W x {1..T}.
  double integral() const;
};

/// lambda_space(s) lambda_time(t) / n.
SpaceTimeIntensity estimate_separable_intensity(const MultiPattern& pattern, double spatial_bandwidth,
                                                double temporal_bandwidth, int cells = 64);
/// Product-kernel estimator with separate spatial and temporal edge corrections.
SpaceTimeIntensity estimate_nonseparable_intensity(const MultiPattern& pattern, double spatial_bandwidth,
                                                   double temporal_bandwidth, int cells = 64);

/// Scott's rule: sigma n^(-1/6) in space (sigma pooled over both axes), sigma n^(-1/5) in time.
double scott_spatial_bandwidth(const MultiPattern& pattern);
double scott_temporal_bandwidth(const MultiPattern& pattern);

enum class CurveKind { pair_correlation, marked_K, mark_weighted_K };
std::string to_string(CurveKind kind);

struct CurveEstimate {
  CurveKind kind = CurveKind::marked_K;
  std::vector<double> r_grid;
  std::vector<double> t_grid;
  std::vector<double> values;  // [ir * t_grid.size() + it]
  std::vector<int> C;
  std::vector<int> D;

  double at(std::size_t ir, std::size_t it) const { return values[ir * t_grid.size() + it]; }
};

enum class EdgeCorrection {
  border,  // reference point at least the reach away from the spatial and temporal boundary
  none,
};

/// Plug-in intensity lambda(s, t, m) for the second-order estimators.
struct IntensityPlugin {
  enum class Kind {
    homogeneous,         // n_m / (|W| T) per type
    homogeneous_ground,  // n / (|W| T) shared equally by the d types: n / (d |W| T)
    separable_kernel,    // separable kernel estimate scaled by the type share n_m / n
  };
  Kind kind = Kind::homogeneous;
  double spatial_bandwidth = 0.0;  // kernel plug-in only; <= 0 selects Scott's rule
  double temporal_bandwidth = 0.0;
  int cells = 64;
};

/// Under border correction, (r, t) cells whose eligible region is empty are NaN.
struct SecondOrderOptions {
  IntensityPlugin intensity;
  EdgeCorrection edge = EdgeCorrection::border;
};

/// K^CD(r, t); equals 2 pi r^2 t in expectation for Poisson components.
CurveEstimate estimate_marked_K(const MultiPattern& pattern, const std::vector<int>& C, const std::vector<int>& D,
                                const std::vector<double>& r_grid, const std::vector<double>& t_grid,
                                const SecondOrderOptions& options = {});

/// Kernel pair correlation of the events of `types` (empty = ground process),
/// Epanechnikov kernels with half-widths epsilon (space) and delta (time).
/// Requires r > epsilon and t > delta.
CurveEstimate estimate_pair_correlation(const MultiPattern& pattern, const std::vector<int>& types,
                                        const std::vector<double>& r_grid, const std::vector<double>& t_grid,
                                        double epsilon, double delta, const SecondOrderOptions& options = {});

/// Mark-weighted K of one component, weights m_i m_j / mean(m)^2, minus the
/// unmarked K of the same component.
CurveEstimate estimate_mark_weighted_K(const MultiPattern& pattern, int component, const std::vector<double>& r_grid,
                                       const std::vector<double>& t_grid, const SecondOrderOptions& options = {});

/// P(|k + D| <= t) for integer step difference k.
double temporal_indicator(int k, double t);
/// E[k_delta(|k + D| - t)] for the Epanechnikov kernel of half-width delta.
double temporal_kernel(int k, double t, double delta);

}  // namespace stdgm
