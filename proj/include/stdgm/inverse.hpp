#pragma once

#include <span>
#include <string>
#include <vector>

#include "stdgm/spectra.hpp"

namespace stdgm {

/// Full frequency box p in -P..P, q in -Q..Q, u over one temporal period, built
/// from a half grid (p >= 0) through f(-w) = conj(f(w)).
struct SymmetricSpectrum {
  int P = 0;
  int Q = 0;
  int u_min = 0;
  int steps = 1;
  std::vector<cplx> values;  // [((p + P) * (2Q + 1) + (q + Q)) * T + (u - u_min)]

  int np() const { return 2 * P + 1; }
  int nq() const { return 2 * Q + 1; }
  std::size_t size() const { return static_cast<std::size_t>(np()) * nq() * steps; }
  std::size_t index(int p, int q, int u) const {
    return (static_cast<std::size_t>(p + P) * nq() + static_cast<std::size_t>(q + Q)) * steps +
           static_cast<std::size_t>(u - u_min);
  }
};

/// Lags conjugate to the symmetrised lattice: c_x = a / (2P + 1), c_y = b / (2Q + 1)
/// with a in -P..P, b in -Q..Q, and integer time lag h over the same residues as u.
struct LagGrid {
  int P = 0;
  int Q = 0;
  int h_min = 0;
  int steps = 1;

  static LagGrid conjugate_to(const FrequencyGrid& grid);
  int na() const { return 2 * P + 1; }
  int nb() const { return 2 * Q + 1; }
  std::size_t size() const { return static_cast<std::size_t>(na()) * nb() * steps; }
  std::size_t index(int a, int b, int h) const {
    return (static_cast<std::size_t>(a + P) * nb() + static_cast<std::size_t>(b + Q)) * steps +
           static_cast<std::size_t>(h - h_min);
  }
  double cx(int a) const { return static_cast<double>(a) / na(); }
  double cy(int b) const { return static_cast<double>(b) / nb(); }
  /// (a, b, h) of a linear index.
  void lag(std::size_t index, int& a, int& b, int& h) const;
};

/// Throws ErrorKind::symmetry when the grid cannot be mirrored (asymmetric q
/// range, partial temporal period) or when the p = 0 plane violates
/// f(0,-q,-u) = conj f(0,q,u) beyond 1e-9 of the largest modulus.
SymmetricSpectrum symmetrise(const FrequencyGrid& grid, std::span<const cplx> half);

/// (1/N) sum over the box of S(w) exp(+2 pi i (p a/(2P+1) + q b/(2Q+1) + u h/T)).
std::vector<cplx> inverse_sum(const SymmetricSpectrum& spectrum);
/// sum over lags of k(c, h) exp(-2 pi i (...)); no normalising factor.
SymmetricSpectrum forward_sum(const LagGrid& lags, std::span<const cplx> values);

enum class LagKind { complete_auto, complete_cross, partial_auto, partial_cross, scaled };
std::string to_string(LagKind kind);

struct LagSeries {
  int i = 0;
  int j = 0;
  std::vector<double> values;  // real part on the lag grid
  double zero_lag = 0.0;       // value at c = 0, h = 0, reported as the atom
  double imag_residue = 0.0;   // largest |imaginary part| discarded
};

struct LagField {
  LagGrid grid;
  LagKind kind = LagKind::complete_cross;
  std::vector<LagSeries> series;
  std::string conditioning;  // descriptor for partial kinds, empty otherwise
};

/// Inverse of one spectrum entry given on the half grid. Throws a symmetry error
/// when the imaginary residue exceeds 1e-9 of the spectrum's largest modulus.
LagSeries inverse_entry(const FrequencyGrid& grid, std::span<const cplx> half, int i, int j);

/// Every entry i <= j of a spectral field; kind is complete_auto for i == j rows
/// and complete_cross otherwise, so auto and cross series come back in two fields.
struct CompleteCovariance {
  LagField auto_terms;
  LagField cross_terms;
};
CompleteCovariance inverse_transform(const SpectralField& field);

struct PartialLag {
  LagField partial_auto;   // kappa_ii given `auto_conditioning`
  LagField partial_cross;  // zeta_ij given V\{i,j}
};

/// Partial auto-covariance of i with an explicit conditioning set, and partial
/// cross-covariance of (i, j) conditioning on all other components.
PartialLag partial_lag_characteristics(const SpectralField& field, int i, int j,
                                       const std::vector<int>& auto_conditioning);

/// Divides every series (i, j) by sqrt(lambda_i lambda_j).
LagField scaled_covariance(const LagField& field, std::span<const double> intensities);

}  // namespace stdgm
