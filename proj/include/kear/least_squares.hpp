#pragma once

#include <Eigen/Dense>

namespace kear {

/// Outcome of a small dense least-squares solve.
struct LeastSquaresSolution {
    Eigen::VectorXd x;
    Eigen::Index rank = 0;
    double condition_number = 0.0;  // sigma_max / sigma_min over all singular values (inf if singular)
    bool ill_conditioned = false;   // rank deficient or condition number above the warning level
};

/// Singular values below this fraction of the largest are treated as zero.
inline constexpr double kRankTolerance = 1e-12;
/// Condition numbers above this attach a warning to the fitted model.
inline constexpr double kConditionWarning = 1e10;

/// Minimum-norm argmin ||A x - b||_2 through an SVD of A.
/// Throws NearSingularSystem when A has no nonzero singular value.
LeastSquaresSolution solve_least_squares(const Eigen::MatrixXd& a, const Eigen::VectorXd& b);

}  // namespace kear
