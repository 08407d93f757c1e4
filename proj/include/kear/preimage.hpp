#pragma once

#include "kear/kernel.hpp"

#include <span>

namespace kear {

enum class PreimageInit {
    PreviousValue,      // x0 = history[0]
    AlphaWeightedMean,  // x0 = sum alpha_j x_j / sum alpha_j, or history[0] when the sum vanishes
};

struct PreimageSettings {
    int max_iterations = 500;
    double tolerance = 1e-8;  // absolute step size
    double denominator_floor = 1e-12;
    PreimageInit initializer = PreimageInit::AlphaWeightedMean;

    void validate() const;
};

struct PreimageResult {
    double x = 0.0;
    int iterations = 0;
    bool converged = false;
};

/// Pre-image cost for a radial kernel with g(0) = 1:
/// f(x) = C - 2 sum_j alpha_j k(x_j, x) + 1, C = sum_jk alpha_j alpha_k k(x_j, x_k).
double preimage_objective(std::span<const double> alpha, std::span<const double> history,
                          const KernelConfig& kernel, double x);

/// Analytic derivative of preimage_objective for the squared exponential kernel:
/// -(2 / ell^2) sum_j alpha_j k(x_j, x) (x_j - x).
double preimage_objective_derivative(std::span<const double> alpha, std::span<const double> history,
                                     const KernelConfig& kernel, double x);

/// Starting point for the given initializer.
double initial_preimage(std::span<const double> alpha, std::span<const double> history,
                        PreimageInit init, double denominator_floor);

/// Iterates x <- sum alpha_j k(x_j, x) x_j / sum alpha_j k(x_j, x) until the step
/// falls below the tolerance or the iteration budget runs out.
/// Throws DegenerateDenominator when the denominator magnitude drops below the floor.
PreimageResult solve_fixed_point(std::span<const double> alpha, std::span<const double> history,
                                 const KernelConfig& kernel, const PreimageSettings& settings = {});

/// solve_fixed_point with the recovery policy used for forecasting: on a degenerate
/// denominator retry once from the alpha-weighted mean, and if that fails too return
/// the starting point flagged as not converged.
PreimageResult forecast_preimage(std::span<const double> alpha, std::span<const double> history,
                                 const KernelConfig& kernel, const PreimageSettings& settings = {});

}  // namespace kear
