#include "bqr/linalg.hpp"

#include <cmath>
#include <string>

#include <Eigen/Cholesky>

#include "bqr/error.hpp"

namespace bqr {

namespace {

Eigen::LLT<Matrix> factor(const Matrix& matrix, std::string_view what) {
    if (matrix.rows() != matrix.cols()) {
        throw NumericalError(std::string(what) + " is not square (" + std::to_string(matrix.rows()) + "x" +
                             std::to_string(matrix.cols()) + ")");
    }
    if (!matrix.allFinite()) {
        throw NumericalError(std::string(what) + " has non-finite entries");
    }
    const double scale = matrix.cwiseAbs().maxCoeff();
    for (Eigen::Index j = 0; j < matrix.cols(); ++j) {
        for (Eigen::Index i = j + 1; i < matrix.rows(); ++i) {
            if (std::fabs(matrix(i, j) - matrix(j, i)) > 1e-12 * scale) {
                throw NumericalError(std::string(what) + " is not symmetric");
            }
        }
    }
    Eigen::LLT<Matrix> llt(matrix);
    if (llt.info() != Eigen::Success) {
        throw NumericalError(std::string(what) + " is not positive definite");
    }
    return llt;
}

}  // namespace

Matrix cholesky(const Matrix& matrix, std::string_view what) { return factor(matrix, what).matrixL(); }

Vector spd_solve(const Matrix& matrix, const Vector& rhs, std::string_view what) {
    if (rhs.size() != matrix.rows()) {
        throw NumericalError(std::string(what) + ": right-hand side has wrong length");
    }
    return factor(matrix, what).solve(rhs);
}

Matrix spd_inverse(const Matrix& matrix, std::string_view what) {
    return factor(matrix, what).solve(Matrix::Identity(matrix.rows(), matrix.cols()));
}

Vector sample_mvn(const Vector& mean, const Matrix& covariance, Rng& rng) {
    if (mean.size() != covariance.rows()) {
        throw NumericalError("sample_mvn: mean and covariance dimensions differ");
    }
    const auto llt = factor(covariance, "covariance");
    Vector u(mean.size());
    for (Eigen::Index i = 0; i < u.size(); ++i) u[i] = rng.normal();
    return mean + llt.matrixL() * u;
}

Vector sample_mvn_canonical(const Matrix& precision, const Vector& shift, Rng& rng, std::string_view what) {
    if (shift.size() != precision.rows()) {
        throw NumericalError(std::string(what) + ": shift vector has wrong length");
    }
    const auto llt = factor(precision, what);
    Vector u(shift.size());
    for (Eigen::Index i = 0; i < u.size(); ++i) u[i] = rng.normal();
    Vector draw = llt.solve(shift);
    draw += llt.matrixU().solve(u);
    return draw;
}

}  // namespace bqr
