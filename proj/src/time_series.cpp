#include "kear/time_series.hpp"

#include "kear/error.hpp"

#include <array>
#include <charconv>
#include <cmath>
#include <string>

namespace kear {

void require_finite(std::span<const double> values, const char* what)
{
    for (std::size_t i = 0; i < values.size(); ++i) {
        if (!std::isfinite(values[i])) {
            throw InvalidInput(std::string(what) + ": non-finite value at index " + std::to_string(i));
        }
    }
}

TimeSeries TimeSeries::make(std::string name, std::vector<double> values, std::optional<double> dt)
{
    if (values.empty()) {
        throw InvalidInput("time series '" + name + "' is empty");
    }
    require_finite(values, "time series");
    if (dt && !(*dt > 0.0 && std::isfinite(*dt))) {
        throw InvalidInput("time series sampling step must be positive");
    }
    return TimeSeries{std::move(name), std::move(values), dt};
}

TimeSeries TimeSeries::take_first(std::size_t count) const
{
    TimeSeries out = *this;
    if (count < out.values.size()) {
        out.values.resize(count);
    }
    return out;
}

std::string format_double(double value)
{
    if (std::isnan(value)) {
        return "nan";
    }
    if (std::isinf(value)) {
        return value > 0 ? "inf" : "-inf";
    }
    std::array<char, 32> buffer{};
    const auto result = std::to_chars(buffer.data(), buffer.data() + buffer.size(), value);
    return std::string(buffer.data(), result.ptr);
}

std::vector<double> recent_history(std::span<const double> values, std::size_t end, std::size_t count)
{
    if (count > end || end > values.size()) {
        throw InvalidInput("not enough samples for the requested history");
    }
    std::vector<double> history(count);
    for (std::size_t j = 0; j < count; ++j) {
        history[j] = values[end - 1 - j];
    }
    return history;
}

}  // namespace kear
