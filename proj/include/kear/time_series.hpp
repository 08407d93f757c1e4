#pragma once

#include <optional>
#include <span>
#include <string>
#include <vector>

namespace kear {

/// Ordered, finite, real-valued samples.
struct TimeSeries {
    std::string name;
    std::vector<double> values;
    std::optional<double> dt;

    /// Throws InvalidInput when empty or when any value is non-finite.
    static TimeSeries make(std::string name, std::vector<double> values,
                           std::optional<double> dt = std::nullopt);

    [[nodiscard]] std::size_t size() const noexcept { return values.size(); }
    [[nodiscard]] std::span<const double> view() const noexcept { return values; }

    /// First `count` samples (the whole series if it is shorter).
    [[nodiscard]] TimeSeries take_first(std::size_t count) const;
};

/// The `count` most recent values ending just before `end`, most-recent-first.
std::vector<double> recent_history(std::span<const double> values, std::size_t end, std::size_t count);

/// Shortest decimal text that parses back to the same double ("nan", "inf" for non-finite).
std::string format_double(double value);

void require_finite(std::span<const double> values, const char* what);

}  // namespace kear
