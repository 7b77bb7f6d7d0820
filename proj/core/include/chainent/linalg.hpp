#pragma once

#include <Eigen/Dense>

#include "chainent/error.hpp"

namespace chainent::linalg {

/// Lower Cholesky factor; throws `code` when m is not positive definite.
Eigen::MatrixXd cholesky_lower(const Eigen::MatrixXd& m, ErrorCode code, const char* what);

/// Inverse of a symmetric positive definite matrix via Cholesky. The result is
/// symmetrized.
Eigen::MatrixXd spd_inverse(const Eigen::MatrixXd& m, ErrorCode code, const char* what);

/// Eigenvalues (ascending) of spd * sym, computed as the eigenvalues of the
/// congruent symmetric matrix L^T sym L with spd = L L^T.
Eigen::VectorXd product_eigenvalues(const Eigen::MatrixXd& spd, const Eigen::MatrixXd& sym,
                                    ErrorCode code = ErrorCode::NotPositiveDefinite);

/// Same, reusing a precomputed lower Cholesky factor of the spd operand.
Eigen::VectorXd product_eigenvalues_factored(const Eigen::MatrixXd& lower,
                                             const Eigen::MatrixXd& sym);

/// For symmetric positive definite t and the index window [off, off + len), returns
/// a full-row-rank r x len matrix R with
///   R^T R = t_{B,C} t_{C,C}^{-1} t_{C,B} = t_{B,B} - ((t^{-1})_{B,B})^{-1},
/// where B is the window and C its complement. The rank r is found by a
/// column-pivoted QR; r = 0 when the window covers t.
Eigen::MatrixXd boundary_factor(const Eigen::MatrixXd& t, int off, int len, ErrorCode code,
                                const char* what);

}  // namespace chainent::linalg
