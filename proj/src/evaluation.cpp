#include "kear/evaluation.hpp"

#include "kear/error.hpp"
#include "kear/kam.hpp"
#include "kear/kem.hpp"
#include "kear/kernel.hpp"

#include <algorithm>
#include <atomic>
#include <cctype>
#include <cmath>
#include <limits>
#include <numeric>
#include <thread>

namespace kear {
namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

struct KernelForecast {
    double prediction = kNaN;
    bool converged = false;
};

KernelForecast kernel_forecast(std::span<const double> window, const Eigen::MatrixXd& window_gram, Method method,
                               int p, const KernelConfig& kernel, const PreimageSettings& settings)
{
    const std::vector<double> history = recent_history(window, window.size(), static_cast<std::size_t>(p));
    PreimageResult result;
    if (method == Method::KAM) {
        result = predict_kam(fit_kam(window, window_gram, p, kernel), history, settings);
    } else {
        result = predict_kem(fit_kem(window_gram, p, kernel), history, settings);
    }
    return {result.x, result.converged};
}

double squared(double x) { return x * x; }

/// Squared errors closer than this count as equal, so rounding noise on exact fits
/// does not decide a selection.
double tie_tolerance(std::span<const double> train)
{
    double scale = 1.0;
    for (double v : train) {
        scale = std::max(scale, std::abs(v));
    }
    return squared(1e-12 * scale);
}

std::vector<int> sorted_unique(std::vector<int> values)
{
    std::sort(values.begin(), values.end());
    values.erase(std::unique(values.begin(), values.end()), values.end());
    return values;
}

std::vector<double> sorted_unique(std::vector<double> values)
{
    std::sort(values.begin(), values.end());
    values.erase(std::unique(values.begin(), values.end()), values.end());
    return values;
}

Selection select_linear(std::span<const double> train, const EvalConfig& cfg, const std::vector<int>& orders)
{
    const std::size_t half = cfg.w / 2;
    const std::size_t frames = train.size() - half;
    const double tol = tie_tolerance(train);

    // errors[frame][order index]; NaN marks a failed fit
    std::vector<std::vector<double>> errors(frames, std::vector<double>(orders.size(), kNaN));
    std::vector<bool> usable(orders.size(), true);
    for (std::size_t s = 0; s < frames; ++s) {
        const auto window = train.subspan(s, half);
        const double target = train[s + half];
        for (std::size_t o = 0; o < orders.size(); ++o) {
            try {
                const LinearArModel model = fit_linear_ar(window, orders[o], cfg.linear_estimator);
                const auto history = recent_history(window, window.size(), static_cast<std::size_t>(orders[o]));
                errors[s][o] = squared(predict_linear(model, history) - target);
            } catch (const Error&) {
            }
            if (!std::isfinite(errors[s][o])) {
                usable[o] = false;
            }
        }
    }

    std::vector<std::size_t> wins(orders.size(), 0);
    bool any = false;
    for (std::size_t s = 0; s < frames; ++s) {
        std::optional<std::size_t> best;
        for (std::size_t o = 0; o < orders.size(); ++o) {
            if (usable[o] && (!best || errors[s][o] < errors[s][*best] - tol)) {
                best = o;
            }
        }
        if (best) {
            ++wins[*best];
            any = true;
        }
    }
    if (!any) {
        throw SelectionError("no order could be fitted on every inner frame");
    }
    std::size_t mode = 0;
    for (std::size_t o = 1; o < orders.size(); ++o) {
        if (wins[o] > wins[mode]) {
            mode = o;
        }
    }
    return Selection{orders[mode], std::nullopt};
}

Selection select_kernel(std::span<const double> train, const EvalConfig& cfg, const std::vector<int>& orders,
                        const std::vector<double>& percentages)
{
    const std::size_t half = cfg.w / 2;
    const std::size_t frames = train.size() - half;

    // score[order][percentage]: running sum of squared errors; NaN once any frame fails
    std::vector<std::vector<double>> score(orders.size(), std::vector<double>(percentages.size(), 0.0));
    for (std::size_t s = 0; s < frames; ++s) {
        const auto window = train.subspan(s, half);
        const double target = train[s + half];
        for (std::size_t l = 0; l < percentages.size(); ++l) {
            std::optional<KernelConfig> kernel;
            Eigen::MatrixXd window_gram;
            try {
                kernel = KernelConfig::squared_exponential(bandwidth_from_median(window, percentages[l]));
                window_gram = gram(*kernel, window, window);
            } catch (const Error&) {
                for (auto& row : score) {
                    row[l] = kNaN;
                }
                continue;
            }
            for (std::size_t o = 0; o < orders.size(); ++o) {
                if (std::isnan(score[o][l])) {
                    continue;
                }
                double error = kNaN;
                try {
                    const KernelForecast f = kernel_forecast(window, window_gram, cfg.method, orders[o], *kernel,
                                                             cfg.preimage);
                    error = squared(f.prediction - target);
                } catch (const Error&) {
                }
                score[o][l] = std::isfinite(error) ? score[o][l] + error : kNaN;
            }
        }
    }

    const double tol = tie_tolerance(train) * static_cast<double>(frames);
    std::optional<std::pair<std::size_t, std::size_t>> best;
    for (std::size_t o = 0; o < orders.size(); ++o) {
        for (std::size_t l = 0; l < percentages.size(); ++l) {
            if (std::isnan(score[o][l])) {
                continue;
            }
            if (!best || score[o][l] < score[best->first][best->second] - tol) {
                best = std::make_pair(o, l);
            }
        }
    }
    if (!best) {
        throw SelectionError("every (p, lp) grid point failed on some inner frame");
    }
    return Selection{orders[best->first], percentages[best->second]};
}

StepRecord evaluate_frame(std::span<const double> values, std::size_t frame, const EvalConfig& cfg)
{
    StepRecord record;
    record.frame_index = frame;
    const auto train = values.subspan(frame, cfg.w);
    record.truth = values[frame + cfg.w];
    try {
        const Selection selection = select_hyperparameters(train, cfg);
        record.p = selection.p;
        record.lp = selection.lp;
        const OneStepForecast forecast = forecast_one_step(train, cfg.method, selection.p, selection.lp, cfg);
        record.ell = forecast.ell;
        record.prediction = forecast.prediction;
        record.converged = forecast.converged;
        record.squared_error = squared(record.prediction - record.truth);
        if (!std::isfinite(record.squared_error)) {
            throw Error("non-finite forecast");
        }
    } catch (const Error& e) {
        record.failed = true;
        record.failure = e.what();
        record.prediction = kNaN;
        record.squared_error = kNaN;
        record.converged = false;
    }
    return record;
}

}  // namespace

const char* to_string(Method method)
{
    switch (method) {
    case Method::LAR:
        return "lar";
    case Method::KAM:
        return "kam";
    case Method::KEM:
        return "kem";
    }
    return "unknown";
}

Method parse_method(const std::string& text)
{
    std::string lower(text);
    std::transform(lower.begin(), lower.end(), lower.begin(), [](unsigned char c) { return std::tolower(c); });
    if (lower == "lar") {
        return Method::LAR;
    }
    if (lower == "kam") {
        return Method::KAM;
    }
    if (lower == "kem") {
        return Method::KEM;
    }
    throw InvalidConfig("unknown method '" + text + "' (expected lar, kam or kem)");
}

void EvalConfig::validate() const
{
    if (w < 2 || w % 2 != 0) {
        throw InvalidConfig("w must be even and at least 2");
    }
    if (p_grid.empty()) {
        throw InvalidConfig("p grid is empty");
    }
    for (int p : p_grid) {
        if (p < 1) {
            throw InvalidConfig("p grid values must be at least 1");
        }
    }
    const int max_p = *std::max_element(p_grid.begin(), p_grid.end());
    if (w < 2 * static_cast<std::size_t>(max_p) + 2) {
        throw InvalidConfig("w must be at least 2 * max(p) + 2");
    }
    if (method != Method::LAR) {
        if (lp_grid.empty()) {
            throw InvalidConfig("bandwidth percentage grid is empty");
        }
        for (double lp : lp_grid) {
            if (!(lp > 0.0) || !std::isfinite(lp)) {
                throw InvalidConfig("bandwidth percentages must be finite and positive");
            }
        }
    }
    if (jobs < 1) {
        throw InvalidConfig("jobs must be at least 1");
    }
    try {
        preimage.validate();
    } catch (const InvalidInput& e) {
        throw InvalidConfig(e.what());
    }
}

std::vector<double> ForecastReport::squared_errors() const
{
    std::vector<double> out;
    out.reserve(steps.size());
    for (const StepRecord& step : steps) {
        if (!step.failed) {
            out.push_back(step.squared_error);
        }
    }
    return out;
}

double quantile(std::span<const double> values, double q)
{
    if (values.empty()) {
        throw InvalidInput("quantile of an empty list");
    }
    if (!(q >= 0.0 && q <= 1.0)) {
        throw InvalidInput("quantile level must lie in [0, 1]");
    }
    std::vector<double> sorted(values.begin(), values.end());
    std::sort(sorted.begin(), sorted.end());
    const double h = static_cast<double>(sorted.size() - 1) * q;
    const auto lower = static_cast<std::size_t>(std::floor(h));
    if (lower + 1 >= sorted.size()) {
        return sorted.back();
    }
    return sorted[lower] + (h - static_cast<double>(lower)) * (sorted[lower + 1] - sorted[lower]);
}

double aggregate_mse(std::span<const double> squared_errors, bool trim)
{
    if (squared_errors.empty()) {
        throw InvalidInput("aggregate_mse: no errors");
    }
    if (!trim) {
        return std::accumulate(squared_errors.begin(), squared_errors.end(), 0.0) /
               static_cast<double>(squared_errors.size());
    }
    const double q25 = quantile(squared_errors, 0.25);
    const double q75 = quantile(squared_errors, 0.75);
    double sum = 0.0;
    std::size_t count = 0;
    for (double e : squared_errors) {
        if (e >= q25 && e <= q75) {
            sum += e;
            ++count;
        }
    }
    if (count == 0) {
        // two distinct values: the band between the quartiles holds no sample
        return aggregate_mse(squared_errors, false);
    }
    return sum / static_cast<double>(count);
}

OneStepForecast forecast_one_step(std::span<const double> train, Method method, int p, std::optional<double> lp,
                                  const EvalConfig& cfg)
{
    const std::vector<double> history = recent_history(train, train.size(), static_cast<std::size_t>(p));
    if (method == Method::LAR) {
        const LinearArModel model = fit_linear_ar(train, p, cfg.linear_estimator);
        return {predict_linear(model, history), std::nullopt, true};
    }
    if (!lp) {
        throw InvalidConfig("kernel methods need a bandwidth percentage");
    }
    const KernelConfig kernel = KernelConfig::squared_exponential(bandwidth_from_median(train, *lp));
    const Eigen::MatrixXd train_gram = gram(kernel, train, train);
    const KernelForecast f = kernel_forecast(train, train_gram, method, p, kernel, cfg.preimage);
    return {f.prediction, kernel.bandwidth, f.converged};
}

Selection select_hyperparameters(std::span<const double> train, const EvalConfig& cfg)
{
    if (train.size() != cfg.w || cfg.w % 2 != 0 || cfg.w < 2) {
        throw InvalidConfig("training block must hold exactly w samples with w even");
    }
    const std::vector<int> orders = sorted_unique(cfg.p_grid);
    if (cfg.method == Method::LAR) {
        return select_linear(train, cfg, orders);
    }
    return select_kernel(train, cfg, orders, sorted_unique(cfg.lp_grid));
}

ForecastReport run_outer_evaluation(const TimeSeries& series, const EvalConfig& cfg)
{
    cfg.validate();
    if (series.size() <= cfg.w) {
        throw InvalidConfig("series must be longer than w");
    }
    const std::size_t steps = cfg.steps.value_or(series.size() - cfg.w);
    if (steps == 0 || series.size() < cfg.w + steps) {
        throw InvalidConfig("series length must be at least w + steps");
    }

    ForecastReport report;
    report.method = cfg.method;
    report.steps.resize(steps);
    const std::span<const double> values = series.view();

    std::atomic<std::size_t> next{0};
    auto worker = [&] {
        for (std::size_t frame = next++; frame < steps; frame = next++) {
            report.steps[frame] = evaluate_frame(values, frame, cfg);
        }
    };
    const unsigned threads = std::max(1u, std::min<unsigned>(cfg.jobs, static_cast<unsigned>(steps)));
    if (threads == 1) {
        worker();
    } else {
        std::vector<std::jthread> pool;
        pool.reserve(threads);
        for (unsigned i = 0; i < threads; ++i) {
            pool.emplace_back(worker);
        }
    }

    for (const StepRecord& step : report.steps) {
        report.failure_count += step.failed ? 1 : 0;
        report.nonconverged_count += (!step.failed && !step.converged) ? 1 : 0;
    }
    const std::vector<double> errors = report.squared_errors();
    if (errors.empty()) {
        report.mse = kNaN;
        report.mse_trimmed = kNaN;
    } else {
        report.mse = aggregate_mse(errors, false);
        report.mse_trimmed = aggregate_mse(errors, true);
    }
    return report;
}

}  // namespace kear
