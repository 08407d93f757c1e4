#include "kear/kam.hpp"

#include "kear/error.hpp"
#include "kear/least_squares.hpp"
#include "kear/time_series.hpp"

#include <string>

namespace kear {
namespace {

void check_order(int order)
{
    if (order < 1) {
        throw InvalidInput("AR order must be at least 1");
    }
}

}  // namespace

KamSystem build_kam_system(const Eigen::MatrixXd& series_gram, int order)
{
    check_order(order);
    const Eigen::Index n = series_gram.rows();
    const Eigen::Index p = order;
    if (series_gram.cols() != n || n < p + 1) {
        throw InvalidInput("KAM: Gram matrix too small for the requested order");
    }
    KamSystem sys{Eigen::MatrixXd::Zero(p, p), Eigen::VectorXd::Zero(p)};
    for (Eigen::Index t = p; t < n; ++t) {
        for (Eigen::Index k = 1; k <= p; ++k) {
            sys.r_vector(k - 1) += series_gram(t, t - k);
            for (Eigen::Index j = 1; j <= p; ++j) {
                sys.r_matrix(k - 1, j - 1) += series_gram(t - j, t - k);
            }
        }
    }
    const double count = static_cast<double>(n - p);
    sys.r_vector /= count;
    sys.r_matrix /= count;
    return sys;
}

KamSystem build_kam_system(std::span<const double> series, int order, const KernelConfig& kernel)
{
    check_order(order);
    if (series.size() < static_cast<std::size_t>(order) + 1) {
        throw InvalidInput("KAM: series shorter than p + 1");
    }
    return build_kam_system(gram(kernel, series, series), order);
}

KamModel fit_kam(std::span<const double> series, const Eigen::MatrixXd& series_gram, int order,
                 const KernelConfig& kernel)
{
    check_order(order);
    if (series.size() < 2 * static_cast<std::size_t>(order) + 1) {
        throw InvalidInput("KAM(" + std::to_string(order) + ") needs at least " +
                           std::to_string(2 * order + 1) + " samples");
    }
    if (series_gram.rows() != static_cast<Eigen::Index>(series.size())) {
        throw InvalidInput("KAM: Gram matrix does not match the series");
    }
    const KamSystem sys = build_kam_system(series_gram, order);
    const LeastSquaresSolution solution = solve_least_squares(sys.r_matrix, sys.r_vector);

    KamModel model;
    model.order = order;
    model.coefficients.assign(solution.x.data(), solution.x.data() + solution.x.size());
    model.kernel = kernel;
    model.training_tail = recent_history(series, series.size(), static_cast<std::size_t>(order));
    model.condition_number = solution.condition_number;
    model.ill_conditioned = solution.ill_conditioned;
    return model;
}

KamModel fit_kam(std::span<const double> series, int order, const KernelConfig& kernel)
{
    check_order(order);
    if (series.empty()) {
        throw InvalidInput("KAM: empty series");
    }
    return fit_kam(series, gram(kernel, series, series), order, kernel);
}

PreimageResult predict_kam(const KamModel& model, std::span<const double> history,
                           const PreimageSettings& settings)
{
    if (history.size() != model.coefficients.size()) {
        throw InvalidInput("predict_kam: history must hold exactly p values");
    }
    return forecast_preimage(model.coefficients, history, model.kernel, settings);
}

}  // namespace kear
