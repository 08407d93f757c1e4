#include "kear/ar_linear.hpp"

#include "kear/error.hpp"
#include "kear/time_series.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <string>

namespace kear {
namespace {

void check_fit_preconditions(std::span<const double> series, int order)
{
    if (order < 1) {
        throw InvalidInput("AR order must be at least 1");
    }
    if (series.size() < 2 * static_cast<std::size_t>(order) + 1) {
        throw InvalidInput("linear AR(" + std::to_string(order) + ") needs at least " +
                           std::to_string(2 * order + 1) + " samples");
    }
    require_finite(series, "fit_linear_ar");
}

// Variance at or below rounding noise of the data magnitude means the centered series is zero.
void check_variation(double variance, std::span<const double> series)
{
    double scale = 0.0;
    for (double v : series) {
        scale = std::max(scale, std::abs(v));
    }
    const double noise = 64.0 * std::numeric_limits<double>::epsilon() * scale;
    if (!(variance > noise * noise)) {
        throw NearSingularSystem("linear AR: centered series has no variation");
    }
}

LinearArModel finish(LeastSquaresSolution solution, int order, double intercept_base,
                     std::span<const double> lag_means)
{
    LinearArModel model;
    model.order = order;
    model.coefficients.assign(solution.x.data(), solution.x.data() + solution.x.size());
    model.intercept = intercept_base;
    for (int j = 0; j < order; ++j) {
        model.intercept -= model.coefficients[static_cast<std::size_t>(j)] * lag_means[static_cast<std::size_t>(j)];
    }
    model.condition_number = solution.condition_number;
    model.ill_conditioned = solution.ill_conditioned;
    return model;
}

LinearArModel fit_lagged_window(std::span<const double> x, int order)
{
    const std::size_t p = static_cast<std::size_t>(order);
    const std::size_t count = x.size() - p;

    // means[j] is the mean of the lag-j column x[t - j], t = p..n-1
    std::vector<double> means(p + 1, 0.0);
    for (std::size_t j = 0; j <= p; ++j) {
        double sum = 0.0;
        for (std::size_t t = p; t < x.size(); ++t) {
            sum += x[t - j];
        }
        means[j] = sum / static_cast<double>(count);
    }

    Eigen::MatrixXd moments = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(p + 1), static_cast<Eigen::Index>(p + 1));
    for (std::size_t t = p; t < x.size(); ++t) {
        for (std::size_t k = 0; k <= p; ++k) {
            const double dk = x[t - k] - means[k];
            for (std::size_t j = k; j <= p; ++j) {
                moments(static_cast<Eigen::Index>(k), static_cast<Eigen::Index>(j)) += dk * (x[t - j] - means[j]);
            }
        }
    }
    moments /= static_cast<double>(count);
    moments.triangularView<Eigen::StrictlyLower>() = moments.transpose();

    const Eigen::Index n = static_cast<Eigen::Index>(p);
    check_variation(moments.diagonal().maxCoeff(), x);
    const Eigen::MatrixXd gamma = moments.bottomRightCorner(n, n);
    const Eigen::VectorXd rhs = moments.row(0).tail(n).transpose();
    return finish(solve_least_squares(gamma, rhs), order, means[0],
                  std::span<const double>(means).subspan(1));
}

LinearArModel fit_biased_autocovariance(std::span<const double> x, int order)
{
    const std::vector<double> acov = sample_autocovariance(x, order);
    check_variation(acov[0], x);
    const double mean = std::accumulate(x.begin(), x.end(), 0.0) / static_cast<double>(x.size());
    const std::vector<double> lag_means(static_cast<std::size_t>(order), mean);
    return finish(solve_yule_walker(acov, order), order, mean, lag_means);
}

}  // namespace

LinearArModel LinearArModel::centered(std::vector<double> lambda, double mean)
{
    LinearArModel model;
    model.order = static_cast<int>(lambda.size());
    const double sum = std::accumulate(lambda.begin(), lambda.end(), 0.0);
    model.intercept = mean * (1.0 - sum);
    model.coefficients = std::move(lambda);
    return model;
}

std::vector<double> sample_autocovariance(std::span<const double> series, int max_lag)
{
    if (series.empty() || max_lag < 0 || static_cast<std::size_t>(max_lag) >= series.size()) {
        throw InvalidInput("autocovariance: lag out of range");
    }
    const double n = static_cast<double>(series.size());
    const double mean = std::accumulate(series.begin(), series.end(), 0.0) / n;
    std::vector<double> acov(static_cast<std::size_t>(max_lag) + 1, 0.0);
    for (std::size_t h = 0; h < acov.size(); ++h) {
        double sum = 0.0;
        for (std::size_t t = 0; t + h < series.size(); ++t) {
            sum += (series[t] - mean) * (series[t + h] - mean);
        }
        acov[h] = sum / n;
    }
    return acov;
}

LeastSquaresSolution solve_yule_walker(std::span<const double> autocovariance, int order)
{
    if (order < 1 || autocovariance.size() < static_cast<std::size_t>(order) + 1) {
        throw InvalidInput("Yule-Walker: need autocovariances at lags 0..p");
    }
    const Eigen::Index p = order;
    Eigen::MatrixXd gamma(p, p);
    Eigen::VectorXd rhs(p);
    for (Eigen::Index k = 0; k < p; ++k) {
        for (Eigen::Index j = 0; j < p; ++j) {
            gamma(k, j) = autocovariance[static_cast<std::size_t>(std::abs(k - j))];
        }
        rhs(k) = autocovariance[static_cast<std::size_t>(k + 1)];
    }
    return solve_least_squares(gamma, rhs);
}

LinearArModel fit_linear_ar(std::span<const double> series, int order, MomentEstimator estimator)
{
    check_fit_preconditions(series, order);
    switch (estimator) {
    case MomentEstimator::LaggedWindow:
        return fit_lagged_window(series, order);
    case MomentEstimator::BiasedAutocovariance:
        return fit_biased_autocovariance(series, order);
    }
    throw InvalidInput("unknown moment estimator");
}

double predict_linear(const LinearArModel& model, std::span<const double> history)
{
    if (history.size() != model.coefficients.size()) {
        throw InvalidInput("predict_linear: history must hold exactly p values");
    }
    double out = model.intercept;
    for (std::size_t j = 0; j < history.size(); ++j) {
        out += model.coefficients[j] * history[j];
    }
    return out;
}

}  // namespace kear
