#pragma once

#include <Eigen/Dense>

#include <span>

namespace kear {

enum class KernelKind { SquaredExponential };

struct KernelConfig {
    KernelKind kind = KernelKind::SquaredExponential;
    double bandwidth = 1.0;  // length-scale; enters the exponent squared

    /// Throws InvalidInput unless the bandwidth is finite and positive.
    static KernelConfig squared_exponential(double bandwidth);
};

/// exp(-(x - y)^2 / (2 bandwidth^2)).
double evaluate(const KernelConfig& cfg, double x, double y);

/// Same as evaluate() without argument checks, for inner loops over validated data.
inline double evaluate_unchecked(double inv_two_ell_sq, double x, double y) noexcept
{
    const double d = x - y;
    return std::exp(-d * d * inv_two_ell_sq);
}

inline double inverse_two_ell_squared(const KernelConfig& cfg) noexcept
{
    return 1.0 / (2.0 * cfg.bandwidth * cfg.bandwidth);
}

/// Entry (r, s) = evaluate(cfg, xs[r], ys[s]).
Eigen::MatrixXd gram(const KernelConfig& cfg, std::span<const double> xs, std::span<const double> ys);

/// Median; even-length inputs average the two central order statistics.
double median(std::span<const double> samples);

/// percentage * |median(samples)|. Only the magnitude matters because the kernel
/// uses the squared length-scale. Throws DegenerateBandwidth when the result is
/// zero or non-finite.
double bandwidth_from_median(std::span<const double> samples, double percentage);

}  // namespace kear
