#pragma once

#include <string>
#include <vector>

#include "stdgm/linalg.hpp"
#include "stdgm/spectra.hpp"

namespace stdgm {

/// Per-frequency inverse of a smoothed spectral matrix.
struct InverseField {
  FrequencyGrid grid;
  int dim = 0;
  std::vector<cplx> values;    // [(g * dim + i) * dim + j]
  std::vector<double> ridge;   // epsilon applied at each grid point
  std::vector<char> singular;  // 1 where every ridge failed
  bool marked = false;
  bool degenerate = false;  // the input field carried no information (e.g. constant marks)
  std::vector<std::string> warnings;

  cplx operator()(std::size_t g, int i, int j) const {
    return values[(g * static_cast<std::size_t>(dim) + static_cast<std::size_t>(i)) * dim + j];
  }
  std::size_t singular_count() const;
};

/// OpenMP over grid points. Rejects raw periodograms (rank one) and smoothing
/// neighbourhoods smaller than d; throws contract errors for non-Hermitian input.
InverseField invert_spectral_matrix(const SpectralField& field, const RidgePolicy& policy = {});

namespace reference {
InverseField invert_spectral_matrix(const SpectralField& field, const RidgePolicy& policy = {});
}

/// |P_ij| / sqrt(P_ii P_jj) per grid point; 0 at singular points.
std::vector<double> rescaled_inverse_density(const InverseField& inverse, int i, int j);
/// Complex partial coherency -P_ij / sqrt(P_ii P_jj), conditioning on all other components.
std::vector<cplx> partial_coherence_via_inverse(const InverseField& inverse, int i, int j);

struct PartialPair {
  int i = 0;
  int j = 1;
  std::vector<cplx> cross;      // f_ij|rest
  std::vector<cplx> coherency;  // R_ij|rest
  std::vector<double> abs_d;    // |d_ij|
};

/// All unordered pairs i < j, conditioning on the remaining d - 2 components.
struct PartialField {
  FrequencyGrid grid;
  int dim = 0;
  std::vector<PartialPair> pairs;  // lexicographic (0,1), (0,2), ...
  std::vector<double> ridge;
  std::vector<char> singular;
  bool marked = false;
  bool degenerate = false;
  std::vector<std::string> warnings;

  const PartialPair& pair(int i, int j) const;
  static std::string conditioning_set(int i, int j) {
    return "V\\{" + std::to_string(i + 1) + "," + std::to_string(j + 1) + "}";
  }
};

PartialField partial_field(const InverseField& inverse);
/// Inversion plus pair extraction in one call.
PartialField compute_partial(const SpectralField& field, const RidgePolicy& policy = {});

/// Schur complement entry f_ab - f_aC f_CC^-1 f_Cb for an explicit conditioning
/// set C. The ridge policy is applied to f_CC; throws GridPointError(singular)
/// when it cannot be conditioned.
std::vector<cplx> partial_spectrum_direct(const SpectralField& field, int a, int b, const std::vector<int>& conditioning,
                                          const RidgePolicy& policy = {});
/// f_ij|V\{i,j} by the direct formula; requires d >= 3.
std::vector<cplx> partial_cross_spectrum_direct(const SpectralField& field, int i, int j,
                                                const RidgePolicy& policy = {});
/// R_ij|V\{i,j} by the direct formula; requires d >= 3.
std::vector<cplx> partial_coherence_direct(const SpectralField& field, int i, int j, const RidgePolicy& policy = {});

/// Partial coherency of (i, j) given k alone, from complex coherencies R_ab:
/// (R_ij - R_ik conj(R_jk)) / sqrt((1 - |R_ik|^2)(1 - |R_jk|^2)).
/// Throws GridPointError(singular) when |R_ik| or |R_jk| reaches 1.
std::vector<cplx> partial_coherence_three(const SpectralField& field, int i, int j, int k);

/// f_iK|J: cross-spectrum of i with the superposition of K, conditioned on J.
std::vector<cplx> partial_dot_spectrum(const SpectralField& field, int i, const std::vector<int>& K,
                                       const std::vector<int>& J, const RidgePolicy& policy = {});

}  // namespace stdgm
