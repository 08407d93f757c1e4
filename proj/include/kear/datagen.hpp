#pragma once

#include "kear/time_series.hpp"

#include <cstddef>
#include <filesystem>
#include <optional>

namespace kear {

/// dx/dt = -a_decay x(t) + b_gain x(t - tau) / (1 + x(t - tau)^exponent)
struct MackeyGlassParams {
    double tau = 30.0;
    double a_decay = 0.1;
    double b_gain = 0.2;
    double exponent = 10.0;
    double dt = 0.1;
    int sample_every = 10;
    std::size_t burn_in = 1000;  // output samples discarded
    double initial_history = 1.2;

    void validate() const;
};

struct LorenzParams {
    double a = 10.0;
    double r = 28.0;
    double b = 8.0 / 3.0;
    double dt = 0.01;
    int sample_every = 5;
    std::size_t burn_in = 1000;
    double x0 = 1.0;
    double y0 = 1.0;
    double z0 = 1.0;

    void validate() const;
};

/// Fixed-step RK4 with linear interpolation into the delay buffer.
/// Throws IntegrationBlowup on a non-finite state.
TimeSeries generate_mackey_glass(const MackeyGlassParams& params, std::size_t length);

struct LorenzSeries {
    TimeSeries x;
    TimeSeries y;
    TimeSeries z;
};

LorenzSeries generate_lorenz(const LorenzParams& params, std::size_t length);

struct CsvOptions {
    std::size_t column = 0;
    std::optional<std::size_t> take_first;
    char delimiter = ',';
};

/// Reads one numeric column. A leading block of lines whose target field does not
/// parse is skipped as a header; a non-numeric field after the first number raises
/// NonNumericRow. Blank lines are ignored.
TimeSeries load_csv(const std::filesystem::path& path, const CsvOptions& options = {});

/// One value per line at round-trip precision.
void save_csv(const std::filesystem::path& path, const TimeSeries& series);

}  // namespace kear
