#include "kear/kernel.hpp"

#include "kear/error.hpp"
#include "kear/time_series.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

namespace kear {

KernelConfig KernelConfig::squared_exponential(double bandwidth)
{
    if (!(bandwidth > 0.0) || !std::isfinite(bandwidth)) {
        throw InvalidInput("kernel bandwidth must be finite and positive");
    }
    return KernelConfig{KernelKind::SquaredExponential, bandwidth};
}

double evaluate(const KernelConfig& cfg, double x, double y)
{
    if (!(cfg.bandwidth > 0.0) || !std::isfinite(cfg.bandwidth)) {
        throw InvalidInput("kernel bandwidth must be finite and positive");
    }
    if (!std::isfinite(x) || !std::isfinite(y)) {
        throw InvalidInput("kernel arguments must be finite");
    }
    return evaluate_unchecked(inverse_two_ell_squared(cfg), x, y);
}

Eigen::MatrixXd gram(const KernelConfig& cfg, std::span<const double> xs, std::span<const double> ys)
{
    if (xs.empty() || ys.empty()) {
        throw InvalidInput("gram: empty sample list");
    }
    if (!(cfg.bandwidth > 0.0) || !std::isfinite(cfg.bandwidth)) {
        throw InvalidInput("kernel bandwidth must be finite and positive");
    }
    require_finite(xs, "gram");
    require_finite(ys, "gram");

    const double scale = inverse_two_ell_squared(cfg);
    const auto rows = static_cast<Eigen::Index>(xs.size());
    const auto cols = static_cast<Eigen::Index>(ys.size());
    Eigen::MatrixXd out(rows, cols);
    const bool same = xs.data() == ys.data() && xs.size() == ys.size();
    for (Eigen::Index s = 0; s < cols; ++s) {
        if (same) {
            out(s, s) = 1.0;
            for (Eigen::Index r = s + 1; r < rows; ++r) {
                out(r, s) = evaluate_unchecked(scale, xs[r], ys[s]);
                out(s, r) = out(r, s);
            }
        } else {
            for (Eigen::Index r = 0; r < rows; ++r) {
                out(r, s) = evaluate_unchecked(scale, xs[r], ys[s]);
            }
        }
    }
    return out;
}

double median(std::span<const double> samples)
{
    if (samples.empty()) {
        throw InvalidInput("median of an empty list");
    }
    std::vector<double> sorted(samples.begin(), samples.end());
    const std::size_t n = sorted.size();
    const auto mid = sorted.begin() + static_cast<std::ptrdiff_t>(n / 2);
    std::nth_element(sorted.begin(), mid, sorted.end());
    const double upper = *mid;
    if (n % 2 == 1) {
        return upper;
    }
    const double lower = *std::max_element(sorted.begin(), mid);
    return 0.5 * (lower + upper);
}

double bandwidth_from_median(std::span<const double> samples, double percentage)
{
    if (!(percentage > 0.0) || !std::isfinite(percentage)) {
        throw InvalidInput("bandwidth percentage must be finite and positive");
    }
    const double ell = percentage * std::abs(median(samples));
    if (!(ell > 0.0) || !std::isfinite(ell)) {
        throw DegenerateBandwidth("median-scaled bandwidth is zero or non-finite");
    }
    return ell;
}

}  // namespace kear
