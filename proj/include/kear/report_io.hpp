#pragma once

#include "kear/evaluation.hpp"

#include <json.hpp>

#include <filesystem>
#include <string>

namespace kear {

/// Header: frame_index,p,lp,ell,prediction,truth,sq_error,converged
std::string steps_csv(const ForecastReport& report);

/// Header: time_index,truth,prediction (time_index = frame_index + w).
std::string plot_csv(const ForecastReport& report, std::size_t w);

nlohmann::json config_json(const EvalConfig& cfg);

/// Config echo, plain and trimmed MSE, failure and non-convergence counts.
nlohmann::json summary_json(const ForecastReport& report, const EvalConfig& cfg, const std::string& dataset);

void write_text(const std::filesystem::path& path, const std::string& text);

}  // namespace kear
