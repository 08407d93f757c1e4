#pragma once

#include "kear/least_squares.hpp"

#include <span>
#include <vector>

namespace kear {

/// Linear AR(p): prediction = intercept + sum_j coefficients[j] * history[j],
/// history ordered most-recent-first.
struct LinearArModel {
    int order = 0;
    std::vector<double> coefficients;
    double intercept = 0.0;
    double condition_number = 1.0;
    bool ill_conditioned = false;

    /// Model that predicts mean + sum_j lambda_j (history[j] - mean).
    static LinearArModel centered(std::vector<double> lambda, double mean);
};

/// How the second moments <X_i, X_{i-k}> of the Yule-Walker system are estimated.
enum class MomentEstimator {
    /// Sample moments over t = p+1..n, where every lag exists; each lag column is
    /// centered by its own mean. Exact on noiseless AR data.
    LaggedWindow,
    /// Classical biased autocovariance (divide by n) of the series centered by its mean.
    BiasedAutocovariance,
};

/// Yule-Walker estimate of lambda from autocovariances c(0..p):
/// solves the Toeplitz system Gamma lambda = gamma with Gamma_kj = c(|k-j|).
LeastSquaresSolution solve_yule_walker(std::span<const double> autocovariance, int order);

/// Biased sample autocovariance of the mean-centered series at lags 0..max_lag.
std::vector<double> sample_autocovariance(std::span<const double> series, int max_lag);

/// Fits AR(p) by the Yule-Walker equations. Requires n >= 2p + 1.
/// Throws NearSingularSystem when the centered series carries no variation.
LinearArModel fit_linear_ar(std::span<const double> series, int order,
                            MomentEstimator estimator = MomentEstimator::BiasedAutocovariance);

/// One-step prediction; `history` holds exactly `order` values, most-recent-first.
double predict_linear(const LinearArModel& model, std::span<const double> history);

}  // namespace kear
