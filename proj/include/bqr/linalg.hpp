#pragma once

#include <string_view>

#include <Eigen/Core>

#include "bqr/rng.hpp"

namespace bqr {

using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;

/// Lower Cholesky factor L with L * L^T = matrix.
///
/// Throws NumericalError naming `what` when the matrix is not square,
/// not symmetric, or not positive definite.
Matrix cholesky(const Matrix& matrix, std::string_view what = "matrix");

/// Solves matrix * x = rhs for symmetric positive definite `matrix`.
Vector spd_solve(const Matrix& matrix, const Vector& rhs, std::string_view what = "matrix");

/// mean + L * u with L the lower Cholesky factor of `covariance`.
Vector sample_mvn(const Vector& mean, const Matrix& covariance, Rng& rng);

/// Draw from N(precision^-1 * shift, precision^-1) without forming the inverse.
///
/// With precision = L L^T the mean solves L L^T m = shift and the draw is
/// m + L^-T u.
Vector sample_mvn_canonical(const Matrix& precision, const Vector& shift, Rng& rng,
                            std::string_view what = "precision");

/// Symmetric inverse of an SPD matrix via its Cholesky factor.
Matrix spd_inverse(const Matrix& matrix, std::string_view what = "matrix");

}  // namespace bqr
