#pragma once

#include <span>
#include <string>
#include <vector>

#include "stdgm/frequency_grid.hpp"
#include "stdgm/kernels.hpp"
#include "stdgm/pattern.hpp"

namespace stdgm {

/// Per-component transforms on a frequency grid.
struct DftField {
  FrequencyGrid grid;
  int components = 0;
  std::vector<cplx> values;  // [c * grid.size() + g]
  std::vector<double> counts;
  bool marked = false;

  std::span<const cplx> component(int c) const {
    return {values.data() + static_cast<std::size_t>(c) * grid.size(), grid.size()};
  }
  cplx at(int c, std::size_t g) const { return values[static_cast<std::size_t>(c) * grid.size() + g]; }
};

/// Unit-square samples of a pattern; weights are 1, or centred marks when `marked`.
std::vector<PointSample> prepare_samples(const MultiPattern& pattern, bool marked);

/// Direct summation, one complex exponential per event and ordinate.
DftField dft(const MultiPattern& pattern, const FrequencyGrid& grid);
/// Factorised evaluation: temporal phase times per-step spatial transforms.
DftField dft_separable(const MultiPattern& pattern, const FrequencyGrid& grid);
/// Mark-weighted transform with summands (m_k - mean_i); requires marks.
DftField marked_dft(const MultiPattern& pattern, const FrequencyGrid& grid, bool separable = true);

enum class Normalisation {
  sqrt_counts,  // f_ij = F_i conj(F_j) / sqrt(n_i n_j)
  unit,         // f_ij = F_i conj(F_j)
};

/// d x d Hermitian matrix per grid point, row-major.
struct SpectralField {
  enum class Stage { raw, smoothed, external };

  FrequencyGrid grid;
  int dim = 0;
  std::vector<cplx> values;  // [(g * dim + i) * dim + j]
  Stage stage = Stage::raw;
  bool marked = false;
  Normalisation normalisation = Normalisation::sqrt_counts;
  std::vector<double> scale;  // per-component divisor sqrt(n_i) (1 for unit)
  SmoothingWidths widths{0, 0, 0};
  /// Smallest Daniell member count over statistic-bearing ordinates.
  int min_neighbourhood = 1;

  /// Wraps externally supplied matrices (tests, synthetic studies).
  static SpectralField from_matrices(const FrequencyGrid& grid, int dim, std::vector<cplx> values);

  std::size_t matrix_size() const { return static_cast<std::size_t>(dim) * dim; }
  cplx operator()(std::size_t g, int i, int j) const {
    return values[(g * static_cast<std::size_t>(dim) + static_cast<std::size_t>(i)) * dim + j];
  }
  std::span<const cplx> matrix(std::size_t g) const { return {values.data() + g * matrix_size(), matrix_size()}; }
  /// Entry (i, j) across the whole grid.
  std::vector<cplx> entry(int i, int j) const;
  bool is_zero() const;
};

SpectralField periodogram_matrix(const DftField& dft, Normalisation normalisation = Normalisation::sqrt_counts);
SpectralField smooth_spectra(const SpectralField& raw, const SmoothingWidths& widths);

/// |f_ij|^2 / (f_ii f_jj); 0 where an auto-spectrum vanishes.
std::vector<double> coherence(const SpectralField& field, int i, int j);

/// f_iJ f_JJ^-1 f_Ji / f_ii. Throws GridPointError(conditioning) when f_JJ is singular.
std::vector<double> multiple_coherence(const SpectralField& field, int i, const std::vector<int>& subset);

/// Statistics between component i and the superposition of all others. The
/// superposition is taken over normalised transforms, so f_i. = sum_j f_ij.
struct DotSpectrum {
  std::vector<cplx> cross;        // f_i.
  std::vector<double> dot_auto;   // f_..
  std::vector<double> coherence;  // |f_i.|^2 / (f_ii f_..)
};
DotSpectrum dot_spectrum(const SpectralField& field, int i);

/// sqrt(f_ii |R_ij|^2) / f_jj with |R_ij|^2 the squared coherence.
std::vector<double> gain_spectrum(const SpectralField& field, int i, int j);
/// sqrt(f_ii |R_i.|^2) / f_..
std::vector<double> dot_gain_spectrum(const SpectralField& field, int i);

struct CrossDecomposition {
  std::vector<double> co;          // Re f_ij
  std::vector<double> quadrature;  // -Im f_ij
  std::vector<double> amplitude;   // |f_ij|
  std::vector<double> phase;       // atan2(-Q, C)
};
CrossDecomposition decompose_cross_spectrum(const SpectralField& field, int i, int j);

}  // namespace stdgm
