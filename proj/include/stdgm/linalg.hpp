#pragma once

#include <optional>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "stdgm/frequency_grid.hpp"

namespace stdgm {

using CMatrix = Eigen::Matrix<cplx, Eigen::Dynamic, Eigen::Dynamic>;

/// Copies a row-major dim x dim block into an Eigen matrix.
CMatrix to_matrix(std::span<const cplx> row_major, int dim);
/// Submatrix with rows `rows` and columns `cols` of a row-major dim x dim block.
CMatrix submatrix(std::span<const cplx> row_major, int dim, std::span<const int> rows, std::span<const int> cols);

/// Largest |A_ij - conj(A_ji)| relative to max |A_ii| (0 for the zero matrix).
double hermitian_defect(const CMatrix& a);

/// Eigenvalues of the Hermitian part, ascending.
Eigen::VectorXd hermitian_eigenvalues(const CMatrix& a);
/// lambda_max / lambda_min for a Hermitian matrix; +inf when lambda_min <= 0.
double condition_number(const CMatrix& a);

/// Inverse through a Cholesky factorisation; nullopt if a is not positive definite.
std::optional<CMatrix> cholesky_inverse(const CMatrix& a);
/// Solves a X = b by LU with partial pivoting; nullopt when a pivot vanishes.
std::optional<CMatrix> lu_solve(const CMatrix& a, const CMatrix& b);

/// Escalating ridge eps * (trace / d) * I applied when cond(A) exceeds the limit.
struct RidgePolicy {
  double max_condition = 1e10;
  std::vector<double> epsilons{1e-8, 1e-6, 1e-4};
};

struct Regularised {
  CMatrix matrix;      // A + ridge * (trace/d) * I
  double ridge = 0.0;  // the epsilon actually applied
  bool singular = false;
};

/// Applies the ridge policy to a Hermitian matrix. `singular` is set when no
/// epsilon brings the condition number under the limit.
Regularised regularise(const CMatrix& a, const RidgePolicy& policy);

}  // namespace stdgm
