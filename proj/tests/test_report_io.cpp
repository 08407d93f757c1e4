#include "kear/report_io.hpp"
#include "temp_dir.hpp"

#include <doctest.h>

#include <cmath>
#include <limits>
#include <sstream>

using namespace kear;

namespace {

ForecastReport fixture()
{
    ForecastReport r;
    r.method = Method::KEM;
    StepRecord a;
    a.frame_index = 0;
    a.p = 2;
    a.lp = 0.5;
    a.ell = 0.45;
    a.prediction = 1.25;
    a.truth = 1.0;
    a.squared_error = 0.0625;
    StepRecord b;
    b.frame_index = 1;
    b.p = 3;
    b.failed = true;
    b.converged = false;
    b.prediction = std::numeric_limits<double>::quiet_NaN();
    b.squared_error = std::numeric_limits<double>::quiet_NaN();
    b.truth = 0.1;
    r.steps = {a, b};
    r.mse = 0.0625;
    r.mse_trimmed = 0.0625;
    r.failure_count = 1;
    return r;
}

}  // namespace

TEST_CASE("step csv")
{
    const std::string csv = steps_csv(fixture());
    CHECK(csv ==
          "frame_index,p,lp,ell,prediction,truth,sq_error,converged\n"
          "0,2,0.5,0.45,1.25,1,0.0625,1\n"
          "1,3,nan,nan,nan,0.1,nan,0\n");
}

TEST_CASE("plot csv offsets by the training length")
{
    CHECK(plot_csv(fixture(), 100) == "time_index,truth,prediction\n100,1,1.25\n101,0.1,nan\n");
}

TEST_CASE("summary json")
{
    EvalConfig cfg;
    cfg.w = 50;
    cfg.steps = 80;
    cfg.trim_iqr = true;
    cfg.jobs = 8;
    const auto j = summary_json(fixture(), cfg, "csv:earthrot.csv");
    CHECK(j["dataset"] == "csv:earthrot.csv");
    CHECK(j["config"]["w"] == 50);
    CHECK(j["config"]["steps"] == 80);
    CHECK(j["config"]["method"] == "kem");
    CHECK(j["config"]["p_grid"].size() == 5);
    CHECK(j["config"]["linear_estimator"] == "biased-autocovariance");
    CHECK_FALSE(j["config"].contains("jobs"));
    CHECK(j["steps_evaluated"] == 2);
    CHECK(j["mse"] == 0.0625);
    CHECK(j["mse_reported"] == 0.0625);
    CHECK(j["failure_count"] == 1);

    ForecastReport all_failed = fixture();
    all_failed.mse = std::numeric_limits<double>::quiet_NaN();
    all_failed.mse_trimmed = all_failed.mse;
    const auto k = summary_json(all_failed, cfg, "x");
    CHECK(k["mse"].is_null());
    CHECK(k["mse_trimmed"].is_null());
}

TEST_CASE("write_text creates parent directories")
{
    testing_support::TempDir dir;
    const auto path = dir.path() / "a" / "b" / "out.txt";
    write_text(path, "hello\n");
    CHECK(testing_support::slurp(path) == "hello\n");
}
