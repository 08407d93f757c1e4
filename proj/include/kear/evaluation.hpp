#pragma once

#include "kear/ar_linear.hpp"
#include "kear/preimage.hpp"
#include "kear/time_series.hpp"

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace kear {

enum class Method { LAR, KAM, KEM };

const char* to_string(Method method);
/// Accepts "lar", "kam", "kem" in any case. Throws InvalidConfig otherwise.
Method parse_method(const std::string& text);

struct EvalConfig {
    std::size_t w = 100;  // outer training frame length, even
    std::vector<int> p_grid{1, 2, 3, 4, 5};
    std::vector<double> lp_grid{0.01, 0.1, 0.5, 1.0, 2.0, 5.0};
    Method method = Method::KEM;
    bool trim_iqr = false;
    std::optional<std::size_t> steps;  // defaults to series length - w
    PreimageSettings preimage;
    MomentEstimator linear_estimator = MomentEstimator::BiasedAutocovariance;
    unsigned jobs = 1;  // worker threads over outer frames; does not affect results

    /// Throws InvalidConfig on an odd or too-short w, empty grids or bad values.
    void validate() const;
};

/// Hyperparameters picked by the inner sliding-window search.
struct Selection {
    int p = 0;
    std::optional<double> lp;  // empty for LAR
};

struct StepRecord {
    std::size_t frame_index = 0;
    int p = 0;
    std::optional<double> lp;
    std::optional<double> ell;
    double prediction = 0.0;
    double truth = 0.0;
    double squared_error = 0.0;
    bool converged = true;
    bool failed = false;
    std::string failure;
};

struct ForecastReport {
    Method method = Method::KEM;
    std::vector<StepRecord> steps;  // ordered by frame index
    double mse = 0.0;               // over successful steps
    double mse_trimmed = 0.0;       // squared errors within [Q25, Q75]
    std::size_t failure_count = 0;
    std::size_t nonconverged_count = 0;

    [[nodiscard]] std::vector<double> squared_errors() const;
};

/// Quantile by linear interpolation between order statistics, h = (n - 1) q.
double quantile(std::span<const double> values, double q);

/// Plain mean, or the mean of the values inside [Q25, Q75] when `trim` is set
/// (the plain mean again when no value falls inside).
double aggregate_mse(std::span<const double> squared_errors, bool trim);

/// Fits `method` with the given order and bandwidth percentage on `train` and
/// forecasts the next value. LAR ignores `lp`.
struct OneStepForecast {
    double prediction = 0.0;
    std::optional<double> ell;
    bool converged = true;
};
OneStepForecast forecast_one_step(std::span<const double> train, Method method, int p,
                                  std::optional<double> lp, const EvalConfig& cfg);

/// Inner search over the w training samples with sliding frames of w/2 + 1.
/// Throws SelectionError when every grid point fails on some inner frame.
Selection select_hyperparameters(std::span<const double> train, const EvalConfig& cfg);

/// Outer sliding frames of w + 1 samples: select, refit on w samples, forecast sample w + 1.
ForecastReport run_outer_evaluation(const TimeSeries& series, const EvalConfig& cfg);

}  // namespace kear
