#include "stdgm/linalg.hpp"

#include <cmath>
#include <limits>

namespace stdgm {

CMatrix to_matrix(std::span<const cplx> row_major, int dim) {
  CMatrix m(dim, dim);
  for (int i = 0; i < dim; ++i)
    for (int j = 0; j < dim; ++j) m(i, j) = row_major[static_cast<std::size_t>(i) * dim + j];
  return m;
}

CMatrix submatrix(std::span<const cplx> row_major, int dim, std::span<const int> rows, std::span<const int> cols) {
  CMatrix m(static_cast<Eigen::Index>(rows.size()), static_cast<Eigen::Index>(cols.size()));
  for (std::size_t a = 0; a < rows.size(); ++a)
    for (std::size_t b = 0; b < cols.size(); ++b)
      m(static_cast<Eigen::Index>(a), static_cast<Eigen::Index>(b)) =
          row_major[static_cast<std::size_t>(rows[a]) * dim + cols[b]];
  return m;
}

double hermitian_defect(const CMatrix& a) {
  double scale = 0.0, defect = 0.0;
  for (Eigen::Index i = 0; i < a.rows(); ++i) {
    scale = std::max(scale, std::abs(a(i, i)));
    for (Eigen::Index j = 0; j < a.cols(); ++j) defect = std::max(defect, std::abs(a(i, j) - std::conj(a(j, i))));
  }
  return scale > 0.0 ? defect / scale : defect;
}

Eigen::VectorXd hermitian_eigenvalues(const CMatrix& a) {
  const CMatrix h = 0.5 * (a + a.adjoint());
  Eigen::SelfAdjointEigenSolver<CMatrix> solver(h, Eigen::EigenvaluesOnly);
  return solver.eigenvalues();
}

double condition_number(const CMatrix& a) {
  const Eigen::VectorXd ev = hermitian_eigenvalues(a);
  if (ev.size() == 0) return 1.0;
  const double lo = ev.minCoeff(), hi = ev.maxCoeff();
  if (!(lo > 0.0)) return std::numeric_limits<double>::infinity();
  return hi / lo;
}

std::optional<CMatrix> cholesky_inverse(const CMatrix& a) {
  Eigen::LLT<CMatrix> llt(a);
  if (llt.info() != Eigen::Success) return std::nullopt;
  return llt.solve(CMatrix::Identity(a.rows(), a.cols()));
}

std::optional<CMatrix> lu_solve(const CMatrix& a, const CMatrix& b) {
  Eigen::PartialPivLU<CMatrix> lu(a);
  const cplx det = lu.determinant();
  if (det == cplx{} || !std::isfinite(std::abs(det))) return std::nullopt;
  return lu.solve(b);
}

Regularised regularise(const CMatrix& a, const RidgePolicy& policy) {
  Regularised out{a, 0.0, false};
  if (a.rows() == 0 || condition_number(a) <= policy.max_condition) return out;
  const double load = a.trace().real() / static_cast<double>(a.rows());
  for (double eps : policy.epsilons) {
    CMatrix trial = a;
    trial.diagonal().array() += cplx{eps * load, 0.0};
    if (condition_number(trial) <= policy.max_condition) {
      out.matrix = std::move(trial);
      out.ridge = eps;
      return out;
    }
  }
  out.singular = true;
  return out;
}

}  // namespace stdgm
