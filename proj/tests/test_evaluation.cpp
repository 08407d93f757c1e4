#include "kear/datagen.hpp"
#include "kear/error.hpp"
#include "kear/evaluation.hpp"
#include "kear/kam.hpp"
#include "kear/kem.hpp"
#include "kear/kernel.hpp"
#include "oracles.hpp"

#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <random>

using namespace kear;

namespace {

EvalConfig small_config(Method method)
{
    EvalConfig cfg;
    cfg.w = 20;
    cfg.method = method;
    cfg.p_grid = {1, 2, 3};
    cfg.lp_grid = {0.5, 1.0, 2.0};
    return cfg;
}

}  // namespace

TEST_CASE("aggregate mse examples")
{
    CHECK(aggregate_mse(std::vector<double>{1, 1, 1, 1}, true) == 1.0);
    CHECK(aggregate_mse(std::vector<double>{0, 1, 2, 100}, false) == 25.75);
    const std::vector<double> eight{0, 1, 2, 3, 4, 5, 6, 7};
    CHECK(aggregate_mse(eight, true) == doctest::Approx(oracle::trimmed_mean_oracle(eight)).epsilon(1e-15));
    CHECK(aggregate_mse(eight, true) == 3.5);  // Q25 = 1.75, Q75 = 5.25 keep 2..5
    CHECK(aggregate_mse(std::vector<double>{1, 3}, true) == 2.0);  // empty band [1.5, 2.5]
    CHECK(aggregate_mse(std::vector<double>{7}, true) == 7.0);
    CHECK_THROWS_AS(aggregate_mse(std::vector<double>{}, false), InvalidInput);
    CHECK_THROWS_AS(aggregate_mse(std::vector<double>{}, true), InvalidInput);
}

TEST_CASE("quantile matches the one-based interpolation rule")
{
    std::mt19937_64 rng(79);
    std::exponential_distribution<double> expo(1.0);
    std::uniform_real_distribution<double> level(0.0, 1.0);
    for (int trial = 0; trial < 200; ++trial) {
        std::vector<double> v(1 + static_cast<std::size_t>(trial % 17));
        for (double& x : v) {
            x = expo(rng);
        }
        const double q = level(rng);
        CHECK(quantile(v, q) == doctest::Approx(oracle::quantile_type7(v, q)).epsilon(1e-14));
    }
    CHECK(quantile(std::vector<double>{3, 1, 2}, 0.0) == 1.0);
    CHECK(quantile(std::vector<double>{3, 1, 2}, 1.0) == 3.0);
    CHECK(quantile(std::vector<double>{4}, 0.3) == 4.0);
    CHECK_THROWS_AS(quantile(std::vector<double>{1}, 1.5), InvalidInput);
}

TEST_CASE("trimming helps on right-skewed fixtures")
{
    const std::vector<double> skewed{0.1, 0.2, 0.2, 0.3, 0.4, 0.5, 9.0, 40.0};
    CHECK(aggregate_mse(skewed, true) < aggregate_mse(skewed, false));
}

TEST_CASE("method names")
{
    CHECK(parse_method("KEM") == Method::KEM);
    CHECK(parse_method("lar") == Method::LAR);
    CHECK(parse_method("Kam") == Method::KAM);
    CHECK(std::string(to_string(Method::KAM)) == "kam");
    CHECK_THROWS_AS(parse_method("gp"), InvalidConfig);
}

TEST_CASE("config validation")
{
    EvalConfig cfg;
    CHECK_NOTHROW(cfg.validate());
    cfg.w = 11;
    CHECK_THROWS_AS(cfg.validate(), InvalidConfig);
    cfg.w = 10;  // max p = 5 needs 12
    CHECK_THROWS_AS(cfg.validate(), InvalidConfig);
    cfg.w = 12;
    CHECK_NOTHROW(cfg.validate());
    cfg.p_grid = {0, 1};
    CHECK_THROWS_AS(cfg.validate(), InvalidConfig);
    cfg.p_grid = {};
    CHECK_THROWS_AS(cfg.validate(), InvalidConfig);
    cfg = {};
    cfg.lp_grid = {1.0, -0.5};
    CHECK_THROWS_AS(cfg.validate(), InvalidConfig);
    cfg.method = Method::LAR;
    CHECK_NOTHROW(cfg.validate());
    cfg = {};
    cfg.jobs = 0;
    CHECK_THROWS_AS(cfg.validate(), InvalidConfig);

    const TimeSeries short_series = TimeSeries::make("s", std::vector<double>(100, 1.0));
    CHECK_THROWS_AS(run_outer_evaluation(short_series, EvalConfig{}), InvalidConfig);
    EvalConfig too_many;
    too_many.w = 20;
    too_many.steps = 81;
    CHECK_THROWS_AS(run_outer_evaluation(short_series, too_many), InvalidConfig);
}

TEST_CASE("single grid point is returned unconditionally")
{
    std::mt19937_64 rng(83);
    std::normal_distribution<double> noise(0.0, 1.0);
    std::vector<double> train(20);
    for (double& v : train) {
        v = 3.0 + noise(rng);
    }
    for (Method m : {Method::LAR, Method::KAM, Method::KEM}) {
        EvalConfig cfg = small_config(m);
        cfg.p_grid = {3};
        cfg.lp_grid = {0.7};
        const Selection s = select_hyperparameters(train, cfg);
        CHECK(s.p == 3);
        if (m == Method::LAR) {
            CHECK_FALSE(s.lp.has_value());
        } else {
            CHECK(*s.lp == 0.7);
        }
    }
}

TEST_CASE("noiseless AR(2) selects order two")
{
    const auto x = oracle::simulate_ar({1.2, -0.5}, 60, 0.0, 1, {0.3, 1.0});
    EvalConfig cfg = small_config(Method::LAR);
    cfg.w = 40;
    cfg.linear_estimator = MomentEstimator::LaggedWindow;
    const Selection s = select_hyperparameters(std::span<const double>(x).first(40), cfg);
    CHECK(s.p == 2);
}

TEST_CASE("noiseless AR series are forecast exactly with the lagged-window estimator")
{
    const std::vector<std::vector<double>> lambdas{{0.9}, {1.2, -0.5}, {0.5, 0.3, -0.2}};
    for (const auto& lambda : lambdas) {
        const auto x = oracle::simulate_ar(lambda, 80, 0.0, 1, std::vector<double>(lambda.size(), 1.0));
        EvalConfig cfg = small_config(Method::LAR);
        cfg.w = 40;
        cfg.linear_estimator = MomentEstimator::LaggedWindow;
        const ForecastReport report = run_outer_evaluation(TimeSeries::make("ar", x), cfg);
        REQUIRE(report.steps.size() == 40);
        CHECK(report.failure_count == 0);
        for (const StepRecord& step : report.steps) {
            CHECK(step.squared_error < 1e-16);
        }
    }
}

TEST_CASE("constant series forecast the constant")
{
    const TimeSeries flat = TimeSeries::make("flat", std::vector<double>(30, 2.5));
    for (Method m : {Method::KAM, Method::KEM}) {
        const ForecastReport report = run_outer_evaluation(flat, small_config(m));
        CHECK(report.failure_count == 0);
        CHECK(report.mse == 0.0);
        for (const StepRecord& step : report.steps) {
            CHECK(step.prediction == doctest::Approx(2.5).epsilon(1e-12));
        }
    }
    // Yule-Walker has nothing to fit on a constant window: every step fails and is counted
    const ForecastReport lar = run_outer_evaluation(flat, small_config(Method::LAR));
    CHECK(lar.failure_count == lar.steps.size());
    CHECK(std::isnan(lar.mse));
}

TEST_CASE("report invariants on Mackey-Glass")
{
    const TimeSeries mg = generate_mackey_glass({}, 50);
    for (Method m : {Method::LAR, Method::KAM, Method::KEM}) {
        EvalConfig cfg = small_config(m);
        const ForecastReport report = run_outer_evaluation(mg, cfg);
        REQUIRE(report.steps.size() == 30);
        CHECK(report.method == m);
        for (std::size_t i = 0; i < report.steps.size(); ++i) {
            const StepRecord& step = report.steps[i];
            CHECK(step.frame_index == i);
            CHECK(step.truth == mg.values[i + cfg.w]);
            CHECK(std::find(cfg.p_grid.begin(), cfg.p_grid.end(), step.p) != cfg.p_grid.end());
            if (m == Method::LAR) {
                CHECK_FALSE(step.lp.has_value());
                CHECK_FALSE(step.ell.has_value());
            } else {
                REQUIRE(step.lp.has_value());
                CHECK(std::find(cfg.lp_grid.begin(), cfg.lp_grid.end(), *step.lp) != cfg.lp_grid.end());
                const auto train = mg.view().subspan(i, cfg.w);
                CHECK(*step.ell == bandwidth_from_median(train, *step.lp));
            }
            CHECK(step.squared_error == (step.prediction - step.truth) * (step.prediction - step.truth));
        }
        const auto errors = report.squared_errors();
        CHECK(report.mse == aggregate_mse(errors, false));
        CHECK(report.mse_trimmed == aggregate_mse(errors, true));

        EvalConfig threaded = cfg;
        threaded.jobs = 3;
        const ForecastReport again = run_outer_evaluation(mg, threaded);
        for (std::size_t i = 0; i < report.steps.size(); ++i) {
            CHECK(again.steps[i].prediction == report.steps[i].prediction);
            CHECK(again.steps[i].p == report.steps[i].p);
        }
        CHECK(again.mse == report.mse);
    }
}

TEST_CASE("kernel selection equals an exhaustive re-implementation")
{
    const TimeSeries mg = generate_mackey_glass({}, 40);
    const std::span<const double> train = mg.view().first(20);
    for (Method m : {Method::KAM, Method::KEM}) {
        EvalConfig cfg;
        cfg.w = 20;
        cfg.method = m;
        const Selection got = select_hyperparameters(train, cfg);

        double best = std::numeric_limits<double>::infinity();
        int best_p = 0;
        double best_lp = 0.0;
        for (int p : cfg.p_grid) {
            for (double lp : cfg.lp_grid) {
                double total = 0.0;
                bool fits = true;
                for (std::size_t s = 0; s < 10 && fits; ++s) {
                    const auto window = train.subspan(s, 10);
                    const auto kernel = KernelConfig::squared_exponential(bandwidth_from_median(window, lp));
                    const auto hist = recent_history(window, 10, static_cast<std::size_t>(p));
                    try {
                        const double pred = m == Method::KAM
                                                ? predict_kam(fit_kam(window, p, kernel), hist, cfg.preimage).x
                                                : predict_kem(fit_kem(window, p, kernel), hist, cfg.preimage).x;
                        total += (pred - train[s + 10]) * (pred - train[s + 10]);
                    } catch (const Error&) {
                        fits = false;  // grid point drops out
                    }
                }
                if (fits && total / 10 < best) {
                    best = total / 10;
                    best_p = p;
                    best_lp = lp;
                }
            }
        }
        CHECK(got.p == best_p);
        CHECK(*got.lp == best_lp);
    }
}

TEST_CASE("failed fits are recorded and excluded")
{
    // A constant stretch makes the median-scaled bandwidth vanish in early frames only.
    std::vector<double> x(20, 0.0);
    const TimeSeries mg = generate_mackey_glass({}, 30);
    x.insert(x.end(), mg.values.begin(), mg.values.end());
    EvalConfig cfg = small_config(Method::KAM);
    const ForecastReport report = run_outer_evaluation(TimeSeries::make("mixed", x), cfg);
    CHECK(report.failure_count > 0);
    CHECK(report.failure_count < report.steps.size());
    for (const StepRecord& step : report.steps) {
        if (step.failed) {
            CHECK(std::isnan(step.prediction));
            CHECK_FALSE(step.failure.empty());
        }
    }
    CHECK(report.mse == aggregate_mse(report.squared_errors(), false));
}
