#include "kear/datagen.hpp"

#include "kear/error.hpp"

#include <array>
#include <charconv>
#include <cmath>
#include <fstream>
#include <string>
#include <string_view>
#include <vector>

namespace kear {
namespace {

void check_finite_state(double value, const char* system, std::size_t step)
{
    if (!std::isfinite(value)) {
        throw IntegrationBlowup(std::string(system) + ": non-finite state at step " + std::to_string(step));
    }
}

/// Trajectory of the delay equation on the grid t_i = i dt, i >= 0; constant history before 0.
class DelayTrajectory {
public:
    DelayTrajectory(double dt, double history) : dt_(dt), history_(history) { points_.push_back(history); }

    [[nodiscard]] double at(double t) const
    {
        if (t <= 0.0) {
            return history_;
        }
        const double pos = t / dt_;
        const auto lower = static_cast<std::size_t>(std::floor(pos));
        if (lower + 1 >= points_.size()) {
            return points_.back();
        }
        const double frac = pos - static_cast<double>(lower);
        return points_[lower] + frac * (points_[lower + 1] - points_[lower]);
    }

    [[nodiscard]] double back() const { return points_.back(); }
    void push(double x) { points_.push_back(x); }

private:
    double dt_;
    double history_;
    std::vector<double> points_;
};

std::string_view trim(std::string_view text)
{
    const auto first = text.find_first_not_of(" \t\r\n");
    if (first == std::string_view::npos) {
        return {};
    }
    const auto last = text.find_last_not_of(" \t\r\n");
    return text.substr(first, last - first + 1);
}

std::optional<double> parse_field(std::string_view line, std::size_t column, char delimiter)
{
    std::size_t start = 0;
    for (std::size_t c = 0; c < column; ++c) {
        const auto pos = line.find(delimiter, start);
        if (pos == std::string_view::npos) {
            return std::nullopt;
        }
        start = pos + 1;
    }
    const auto end = line.find(delimiter, start);
    std::string_view field = trim(line.substr(start, end == std::string_view::npos ? std::string_view::npos : end - start));
    if (!field.empty() && field.front() == '+') {
        field.remove_prefix(1);
    }
    if (field.empty()) {
        return std::nullopt;
    }
    double value = 0.0;
    const auto result = std::from_chars(field.data(), field.data() + field.size(), value);
    if (result.ec != std::errc{} || result.ptr != field.data() + field.size() || !std::isfinite(value)) {
        return std::nullopt;
    }
    return value;
}

}  // namespace

void MackeyGlassParams::validate() const
{
    if (!(dt > 0.0) || sample_every < 1 || !(tau >= 0.0) || !(exponent > 0.0)) {
        throw InvalidInput("Mackey-Glass: need dt > 0, tau >= 0, exponent > 0, sample_every >= 1");
    }
    if (tau > 0.0 && tau < dt) {
        throw InvalidInput("Mackey-Glass: a nonzero delay must be at least one integration step");
    }
}

void LorenzParams::validate() const
{
    if (!(dt > 0.0) || sample_every < 1) {
        throw InvalidInput("Lorenz: need dt > 0 and sample_every >= 1");
    }
}

TimeSeries generate_mackey_glass(const MackeyGlassParams& params, std::size_t length)
{
    params.validate();
    if (length == 0) {
        throw InvalidInput("Mackey-Glass: length must be at least 1");
    }
    const double dt = params.dt;
    auto rhs = [&](double x, double delayed) {
        return -params.a_decay * x + params.b_gain * delayed / (1.0 + std::pow(delayed, params.exponent));
    };

    DelayTrajectory path(dt, params.initial_history);
    const bool delay_free = params.tau == 0.0;
    auto delayed_at = [&](double t, double stage_state) { return delay_free ? stage_state : path.at(t - params.tau); };

    const auto every = static_cast<std::size_t>(params.sample_every);
    const std::size_t total_steps = (params.burn_in + length - 1) * every;
    std::vector<double> values;
    values.reserve(length);
    if (params.burn_in == 0) {
        values.push_back(params.initial_history);
    }
    for (std::size_t step = 0; step < total_steps; ++step) {
        const double t = static_cast<double>(step) * dt;
        const double x = path.back();
        const double k1 = rhs(x, delayed_at(t, x));
        const double x2 = x + 0.5 * dt * k1;
        const double k2 = rhs(x2, delayed_at(t + 0.5 * dt, x2));
        const double x3 = x + 0.5 * dt * k2;
        const double k3 = rhs(x3, delayed_at(t + 0.5 * dt, x3));
        const double x4 = x + dt * k3;
        const double k4 = rhs(x4, delayed_at(t + dt, x4));
        const double next = x + dt / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
        check_finite_state(next, "Mackey-Glass", step + 1);
        path.push(next);
        if ((step + 1) % every == 0 && (step + 1) / every >= params.burn_in) {
            values.push_back(next);
        }
    }
    return TimeSeries::make("mg" + format_double(params.tau), std::move(values), dt * params.sample_every);
}

LorenzSeries generate_lorenz(const LorenzParams& params, std::size_t length)
{
    params.validate();
    if (length == 0) {
        throw InvalidInput("Lorenz: length must be at least 1");
    }
    using State = std::array<double, 3>;
    auto rhs = [&](const State& s) {
        return State{params.a * (s[1] - s[0]), s[0] * (params.r - s[2]) - s[1], s[0] * s[1] - params.b * s[2]};
    };
    auto axpy = [](const State& s, double h, const State& k) {
        return State{s[0] + h * k[0], s[1] + h * k[1], s[2] + h * k[2]};
    };

    const double dt = params.dt;
    const auto every = static_cast<std::size_t>(params.sample_every);
    const std::size_t total_steps = (params.burn_in + length - 1) * every;
    std::vector<double> xs, ys, zs;
    xs.reserve(length);
    ys.reserve(length);
    zs.reserve(length);
    State s{params.x0, params.y0, params.z0};
    auto record = [&] {
        xs.push_back(s[0]);
        ys.push_back(s[1]);
        zs.push_back(s[2]);
    };
    if (params.burn_in == 0) {
        record();
    }
    for (std::size_t step = 0; step < total_steps; ++step) {
        const State k1 = rhs(s);
        const State k2 = rhs(axpy(s, 0.5 * dt, k1));
        const State k3 = rhs(axpy(s, 0.5 * dt, k2));
        const State k4 = rhs(axpy(s, dt, k3));
        for (std::size_t d = 0; d < 3; ++d) {
            s[d] += dt / 6.0 * (k1[d] + 2.0 * k2[d] + 2.0 * k3[d] + k4[d]);
            check_finite_state(s[d], "Lorenz", step + 1);
        }
        if ((step + 1) % every == 0 && (step + 1) / every >= params.burn_in) {
            record();
        }
    }
    const double sample_dt = dt * params.sample_every;
    return LorenzSeries{TimeSeries::make("lorenz-x", std::move(xs), sample_dt),
                        TimeSeries::make("lorenz-y", std::move(ys), sample_dt),
                        TimeSeries::make("lorenz-z", std::move(zs), sample_dt)};
}

TimeSeries load_csv(const std::filesystem::path& path, const CsvOptions& options)
{
    std::ifstream in(path);
    if (!in) {
        throw FileNotFound("cannot open " + path.string());
    }
    std::vector<double> values;
    std::string line;
    std::size_t line_number = 0;
    while (std::getline(in, line)) {
        ++line_number;
        if (trim(line).empty()) {
            continue;
        }
        const auto value = parse_field(line, options.column, options.delimiter);
        if (!value) {
            if (values.empty()) {
                continue;  // header block
            }
            throw NonNumericRow(path.string() + ":" + std::to_string(line_number) + ": non-numeric value in column " +
                                std::to_string(options.column));
        }
        values.push_back(*value);
        if (options.take_first && values.size() >= *options.take_first) {
            break;
        }
    }
    if (values.empty()) {
        throw EmptySeries(path.string() + ": no numeric values");
    }
    return TimeSeries::make(path.stem().string(), std::move(values));
}

void save_csv(const std::filesystem::path& path, const TimeSeries& series)
{
    std::ofstream out(path);
    if (!out) {
        throw Error("cannot write " + path.string());
    }
    for (double v : series.values) {
        out << format_double(v) << '\n';
    }
}

}  // namespace kear
