#include "stdgm/partial.hpp"

#include <algorithm>
#include <cmath>
#include <set>

#include "stdgm/error.hpp"

namespace stdgm {

namespace {

constexpr double kHermitianTolerance = 1e-10;

struct PointInverse {
  double ridge = 0.0;
  bool singular = false;
};

// Inverts the matrix at g into out (row-major). Shared by both drivers.
PointInverse invert_point(const SpectralField& field, std::size_t g, const RidgePolicy& policy, cplx* out) {
  const int d = field.dim;
  const auto m = field.matrix(g);
  const CMatrix a = to_matrix(m, d);
  if (hermitian_defect(a) > kHermitianTolerance)
    throw GridPointError(ErrorKind::contract, g, "spectral matrix is not Hermitian");
  PointInverse result;
  bool positive_diagonal = true;
  for (int i = 0; i < d; ++i) positive_diagonal = positive_diagonal && a(i, i).real() > 0.0;
  std::optional<CMatrix> inv;
  if (positive_diagonal) {
    const Regularised reg = regularise(a, policy);
    result.ridge = reg.ridge;
    if (!reg.singular) inv = cholesky_inverse(reg.matrix);
  }
  if (!inv) {
    result.singular = true;
    std::fill(out, out + static_cast<std::ptrdiff_t>(d) * d, cplx{});
    return result;
  }
  for (int i = 0; i < d; ++i) {
    out[static_cast<std::size_t>(i) * d + i] = {(*inv)(i, i).real(), 0.0};
    for (int j = i + 1; j < d; ++j) {
      out[static_cast<std::size_t>(i) * d + j] = (*inv)(i, j);
      out[static_cast<std::size_t>(j) * d + i] = std::conj((*inv)(i, j));
    }
  }
  return result;
}

InverseField prepare_inverse(const SpectralField& field) {
  if (field.dim < 2) throw Error(ErrorKind::contract, "spectral inversion needs d >= 2");
  if (field.stage == SpectralField::Stage::raw)
    throw Error(ErrorKind::contract, "raw periodogram matrices are rank one; smooth before inverting");
  if (field.stage == SpectralField::Stage::smoothed && field.widths.neighbourhood() < field.dim)
    throw Error(ErrorKind::contract, "smoothing neighbourhood of " + std::to_string(field.widths.neighbourhood()) +
                                         " ordinates is smaller than d=" + std::to_string(field.dim));
  InverseField inv;
  inv.grid = field.grid;
  inv.dim = field.dim;
  inv.marked = field.marked;
  inv.values.assign(field.values.size(), cplx{});
  inv.ridge.assign(field.grid.size(), 0.0);
  inv.singular.assign(field.grid.size(), 0);
  if (field.stage == SpectralField::Stage::smoothed && field.min_neighbourhood < field.dim)
    inv.warnings.push_back("truncated smoothing neighbourhood of " + std::to_string(field.min_neighbourhood) +
                           " ordinates at the grid edge is smaller than d");
  if (field.is_zero()) {
    inv.degenerate = true;
    std::fill(inv.singular.begin(), inv.singular.end(), 1);
    inv.warnings.push_back(field.marked ? "marked spectral field is identically zero (constant marks); partial "
                                          "statistics are undefined"
                                        : "spectral field is identically zero; partial statistics are undefined");
  }
  return inv;
}

void finish_inverse(InverseField& inv) {
  const std::size_t bad = inv.singular_count();
  if (bad > 0 && !inv.degenerate)
    inv.warnings.push_back(std::to_string(bad) + " grid point(s) remained singular after every ridge");
}

}  // namespace

std::size_t InverseField::singular_count() const {
  return static_cast<std::size_t>(std::count(singular.begin(), singular.end(), 1));
}

InverseField invert_spectral_matrix(const SpectralField& field, const RidgePolicy& policy) {
  InverseField inv = prepare_inverse(field);
  if (inv.degenerate) return inv;
  const auto G = static_cast<std::ptrdiff_t>(field.grid.size());
  const std::size_t dd = field.matrix_size();
  // Exceptions must not escape an OpenMP region; the first one is rethrown after it.
  std::exception_ptr failure;
#pragma omp parallel for schedule(dynamic, 32)
  for (std::ptrdiff_t gi = 0; gi < G; ++gi) {
    const auto g = static_cast<std::size_t>(gi);
    try {
      const PointInverse r = invert_point(field, g, policy, inv.values.data() + g * dd);
      inv.ridge[g] = r.ridge;
      inv.singular[g] = r.singular ? 1 : 0;
    } catch (...) {
#pragma omp critical(stdgm_invert_failure)
      if (!failure) failure = std::current_exception();
    }
  }
  if (failure) std::rethrow_exception(failure);
  finish_inverse(inv);
  return inv;
}

InverseField reference::invert_spectral_matrix(const SpectralField& field, const RidgePolicy& policy) {
  InverseField inv = prepare_inverse(field);
  if (inv.degenerate) return inv;
  const std::size_t dd = field.matrix_size();
  for (std::size_t g = 0; g < field.grid.size(); ++g) {
    const PointInverse r = invert_point(field, g, policy, inv.values.data() + g * dd);
    inv.ridge[g] = r.ridge;
    inv.singular[g] = r.singular ? 1 : 0;
  }
  finish_inverse(inv);
  return inv;
}

std::vector<double> rescaled_inverse_density(const InverseField& inverse, int i, int j) {
  std::vector<double> out(inverse.grid.size(), 0.0);
  for (std::size_t g = 0; g < out.size(); ++g) {
    if (inverse.singular[g]) continue;
    const double pii = inverse(g, i, i).real(), pjj = inverse(g, j, j).real();
    if (pii > 0.0 && pjj > 0.0) out[g] = std::abs(inverse(g, i, j)) / std::sqrt(pii * pjj);
  }
  return out;
}

std::vector<cplx> partial_coherence_via_inverse(const InverseField& inverse, int i, int j) {
  std::vector<cplx> out(inverse.grid.size(), cplx{});
  for (std::size_t g = 0; g < out.size(); ++g) {
    if (inverse.singular[g]) continue;
    const double pii = inverse(g, i, i).real(), pjj = inverse(g, j, j).real();
    if (pii > 0.0 && pjj > 0.0) out[g] = -inverse(g, i, j) / std::sqrt(pii * pjj);
  }
  return out;
}

const PartialPair& PartialField::pair(int i, int j) const {
  if (i > j) std::swap(i, j);
  for (const auto& p : pairs)
    if (p.i == i && p.j == j) return p;
  throw Error(ErrorKind::parameter, "no partial statistics for pair (" + std::to_string(i) + "," + std::to_string(j) + ")");
}

PartialField partial_field(const InverseField& inverse) {
  PartialField out;
  out.grid = inverse.grid;
  out.dim = inverse.dim;
  out.ridge = inverse.ridge;
  out.singular = inverse.singular;
  out.marked = inverse.marked;
  out.degenerate = inverse.degenerate;
  out.warnings = inverse.warnings;
  const std::size_t G = inverse.grid.size();
  for (int i = 0; i < inverse.dim; ++i)
    for (int j = i + 1; j < inverse.dim; ++j) {
      PartialPair pp;
      pp.i = i;
      pp.j = j;
      pp.cross.assign(G, cplx{});
      pp.coherency = partial_coherence_via_inverse(inverse, i, j);
      pp.abs_d = rescaled_inverse_density(inverse, i, j);
      for (std::size_t g = 0; g < G; ++g) {
        if (inverse.singular[g]) continue;
        const double pii = inverse(g, i, i).real(), pjj = inverse(g, j, j).real();
        const cplx pij = inverse(g, i, j);
        const double det = pii * pjj - std::norm(pij);
        if (det > 0.0) pp.cross[g] = -pij / det;
      }
      out.pairs.push_back(std::move(pp));
    }
  return out;
}

PartialField compute_partial(const SpectralField& field, const RidgePolicy& policy) {
  return partial_field(invert_spectral_matrix(field, policy));
}

namespace {

void check_index(const SpectralField& f, int a) {
  if (a < 0 || a >= f.dim) throw Error(ErrorKind::parameter, "component index " + std::to_string(a) + " out of range");
}

std::vector<int> complement(int dim, std::initializer_list<int> drop) {
  std::vector<int> rest;
  for (int k = 0; k < dim; ++k)
    if (std::find(drop.begin(), drop.end(), k) == drop.end()) rest.push_back(k);
  return rest;
}

// Sum over t in `targets` of f_row,t - f_row,C f_CC^-1 f_C,t.
cplx schur_sum(const SpectralField& field, std::size_t g, int row, const std::vector<int>& targets,
               const std::vector<int>& conditioning, const RidgePolicy& policy) {
  const auto m = field.matrix(g);
  cplx value{};
  for (int t : targets) value += field(g, row, t);
  if (conditioning.empty()) return value;
  const Regularised reg = regularise(submatrix(m, field.dim, conditioning, conditioning), policy);
  if (reg.singular) throw GridPointError(ErrorKind::singular, g, "conditioning block is singular after every ridge");
  const int r[1] = {row};
  const CMatrix f_rc = submatrix(m, field.dim, r, conditioning);
  CMatrix f_ct = CMatrix::Zero(static_cast<Eigen::Index>(conditioning.size()), 1);
  for (int t : targets) {
    const int col[1] = {t};
    f_ct += submatrix(m, field.dim, conditioning, col);
  }
  const auto x = lu_solve(reg.matrix, f_ct);
  if (!x) throw GridPointError(ErrorKind::singular, g, "conditioning block is singular");
  return value - (f_rc * *x)(0, 0);
}

void check_conditioning(const SpectralField& field, std::initializer_list<int> targets, const std::vector<int>& c) {
  std::set<int> seen;
  for (int k : c) {
    check_index(field, k);
    if (!seen.insert(k).second) throw Error(ErrorKind::parameter, "conditioning set has repeated components");
    if (std::find(targets.begin(), targets.end(), k) != targets.end())
      throw Error(ErrorKind::parameter, "conditioning set must not contain the target components");
  }
}

}  // namespace

std::vector<cplx> partial_spectrum_direct(const SpectralField& field, int a, int b, const std::vector<int>& conditioning,
                                          const RidgePolicy& policy) {
  check_index(field, a);
  check_index(field, b);
  check_conditioning(field, {a, b}, conditioning);
  std::vector<cplx> out(field.grid.size());
  const std::vector<int> target{b};
  for (std::size_t g = 0; g < out.size(); ++g) out[g] = schur_sum(field, g, a, target, conditioning, policy);
  return out;
}

std::vector<cplx> partial_cross_spectrum_direct(const SpectralField& field, int i, int j, const RidgePolicy& policy) {
  if (field.dim < 3) throw Error(ErrorKind::contract, "partial spectra need d >= 3 components to condition on");
  if (i == j) throw Error(ErrorKind::parameter, "partial cross-spectrum needs two distinct components");
  return partial_spectrum_direct(field, i, j, complement(field.dim, {i, j}), policy);
}

std::vector<cplx> partial_coherence_direct(const SpectralField& field, int i, int j, const RidgePolicy& policy) {
  const auto cross = partial_cross_spectrum_direct(field, i, j, policy);
  const auto rest = complement(field.dim, {i, j});
  const auto fii = partial_spectrum_direct(field, i, i, rest, policy);
  const auto fjj = partial_spectrum_direct(field, j, j, rest, policy);
  std::vector<cplx> out(cross.size(), cplx{});
  for (std::size_t g = 0; g < out.size(); ++g) {
    const double a = fii[g].real(), b = fjj[g].real();
    if (a > 0.0 && b > 0.0) out[g] = cross[g] / std::sqrt(a * b);
  }
  return out;
}

std::vector<cplx> partial_coherence_three(const SpectralField& field, int i, int j, int k) {
  check_index(field, i);
  check_index(field, j);
  check_index(field, k);
  if (i == j || i == k || j == k) throw Error(ErrorKind::parameter, "three-component formula needs distinct i, j, k");
  std::vector<cplx> out(field.grid.size());
  for (std::size_t g = 0; g < out.size(); ++g) {
    auto coh = [&](int a, int b) { return field(g, a, b) / std::sqrt(field(g, a, a).real() * field(g, b, b).real()); };
    const cplx rij = coh(i, j), rik = coh(i, k), rjk = coh(j, k);
    const double den = (1.0 - std::norm(rik)) * (1.0 - std::norm(rjk));
    if (!(den > 1e-12) || !std::isfinite(den))
      throw GridPointError(ErrorKind::singular, g, "conditioning component is perfectly coherent with a target");
    out[g] = (rij - rik * std::conj(rjk)) / std::sqrt(den);
  }
  return out;
}

std::vector<cplx> partial_dot_spectrum(const SpectralField& field, int i, const std::vector<int>& K,
                                       const std::vector<int>& J, const RidgePolicy& policy) {
  check_index(field, i);
  if (K.empty()) throw Error(ErrorKind::parameter, "partial dot spectrum needs a non-empty K");
  check_conditioning(field, {i}, K);
  check_conditioning(field, {i}, J);
  for (int k : K)
    if (std::find(J.begin(), J.end(), k) != J.end()) throw Error(ErrorKind::parameter, "K and J must be disjoint");
  std::vector<cplx> out(field.grid.size());
  for (std::size_t g = 0; g < out.size(); ++g) out[g] = schur_sum(field, g, i, K, J, policy);
  return out;
}

}  // namespace stdgm
