#include "kear/least_squares.hpp"

#include "kear/error.hpp"

#include <limits>

namespace kear {

LeastSquaresSolution solve_least_squares(const Eigen::MatrixXd& a, const Eigen::VectorXd& b)
{
    if (a.rows() != b.size() || a.cols() == 0) {
        throw InvalidInput("least squares: dimension mismatch");
    }
    if (!a.allFinite() || !b.allFinite()) {
        throw InvalidInput("least squares: non-finite system");
    }
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(a, Eigen::ComputeThinU | Eigen::ComputeThinV);
    const Eigen::VectorXd& sigma = svd.singularValues();
    const double largest = sigma.size() > 0 ? sigma(0) : 0.0;
    if (!(largest > 0.0)) {
        throw NearSingularSystem("least squares: system matrix is zero");
    }

    svd.setThreshold(kRankTolerance);

    LeastSquaresSolution out;
    out.x = svd.solve(b);
    out.rank = svd.rank();
    const double smallest = sigma(sigma.size() - 1);
    out.condition_number =
        smallest > 0.0 ? largest / smallest : std::numeric_limits<double>::infinity();
    out.ill_conditioned = out.rank < a.cols() || out.condition_number > kConditionWarning;
    return out;
}

}  // namespace kear
