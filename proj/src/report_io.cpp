#include "kear/report_io.hpp"

#include "kear/error.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

namespace kear {
namespace {

std::string optional_field(const std::optional<double>& value)
{
    return value ? format_double(*value) : "nan";
}

nlohmann::json json_number(double value)
{
    return std::isfinite(value) ? nlohmann::json(value) : nlohmann::json(nullptr);
}

const char* initializer_name(PreimageInit init)
{
    return init == PreimageInit::AlphaWeightedMean ? "alpha-weighted-mean" : "previous-value";
}

}  // namespace

std::string steps_csv(const ForecastReport& report)
{
    std::ostringstream out;
    out << "frame_index,p,lp,ell,prediction,truth,sq_error,converged\n";
    for (const StepRecord& s : report.steps) {
        out << s.frame_index << ',' << s.p << ',' << optional_field(s.lp) << ',' << optional_field(s.ell) << ','
            << format_double(s.prediction) << ',' << format_double(s.truth) << ','
            << format_double(s.squared_error) << ',' << (s.converged ? 1 : 0) << '\n';
    }
    return out.str();
}

std::string plot_csv(const ForecastReport& report, std::size_t w)
{
    std::ostringstream out;
    out << "time_index,truth,prediction\n";
    for (const StepRecord& s : report.steps) {
        out << s.frame_index + w << ',' << format_double(s.truth) << ',' << format_double(s.prediction) << '\n';
    }
    return out.str();
}

nlohmann::json config_json(const EvalConfig& cfg)
{
    nlohmann::json j;
    j["method"] = to_string(cfg.method);
    j["w"] = cfg.w;
    j["p_grid"] = cfg.p_grid;
    j["lp_grid"] = cfg.lp_grid;
    j["trim_iqr"] = cfg.trim_iqr;
    j["steps"] = cfg.steps ? nlohmann::json(*cfg.steps) : nlohmann::json(nullptr);
    j["linear_estimator"] =
        cfg.linear_estimator == MomentEstimator::LaggedWindow ? "lagged-window" : "biased-autocovariance";
    j["preimage"] = {{"max_iterations", cfg.preimage.max_iterations},
                     {"tolerance", cfg.preimage.tolerance},
                     {"denominator_floor", cfg.preimage.denominator_floor},
                     {"initializer", initializer_name(cfg.preimage.initializer)}};
    return j;
}

nlohmann::json summary_json(const ForecastReport& report, const EvalConfig& cfg, const std::string& dataset)
{
    nlohmann::json j;
    j["dataset"] = dataset;
    j["config"] = config_json(cfg);
    j["steps_evaluated"] = report.steps.size();
    j["mse"] = json_number(report.mse);
    j["mse_trimmed"] = json_number(report.mse_trimmed);
    j["mse_reported"] = json_number(cfg.trim_iqr ? report.mse_trimmed : report.mse);
    j["failure_count"] = report.failure_count;
    j["nonconverged_count"] = report.nonconverged_count;
    return j;
}

void write_text(const std::filesystem::path& path, const std::string& text)
{
    if (path.has_parent_path()) {
        std::filesystem::create_directories(path.parent_path());
    }
    std::ofstream out(path, std::ios::binary);
    if (!out) {
        throw Error("cannot write " + path.string());
    }
    out << text;
    if (!out) {
        throw Error("failed writing " + path.string());
    }
}

}  // namespace kear
