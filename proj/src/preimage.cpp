#include "kear/preimage.hpp"

#include "kear/error.hpp"
#include "kear/time_series.hpp"

#include <cmath>

namespace kear {
namespace {

void check_lengths(std::span<const double> alpha, std::span<const double> history)
{
    if (alpha.empty() || alpha.size() != history.size()) {
        throw InvalidInput("pre-image: alpha and history must have the same nonzero length");
    }
}

}  // namespace

void PreimageSettings::validate() const
{
    if (max_iterations < 1 || !(tolerance > 0.0) || !(denominator_floor > 0.0)) {
        throw InvalidInput("pre-image settings: need max_iterations >= 1 and positive tolerance and floor");
    }
}

double preimage_objective(std::span<const double> alpha, std::span<const double> history,
                          const KernelConfig& kernel, double x)
{
    check_lengths(alpha, history);
    const double scale = inverse_two_ell_squared(kernel);
    double c = 0.0;
    double cross = 0.0;
    for (std::size_t j = 0; j < alpha.size(); ++j) {
        for (std::size_t k = 0; k < alpha.size(); ++k) {
            c += alpha[j] * alpha[k] * evaluate_unchecked(scale, history[j], history[k]);
        }
        cross += alpha[j] * evaluate_unchecked(scale, history[j], x);
    }
    return c - 2.0 * cross + 1.0;
}

double preimage_objective_derivative(std::span<const double> alpha, std::span<const double> history,
                                     const KernelConfig& kernel, double x)
{
    check_lengths(alpha, history);
    const double scale = inverse_two_ell_squared(kernel);
    double sum = 0.0;
    for (std::size_t j = 0; j < alpha.size(); ++j) {
        sum += alpha[j] * evaluate_unchecked(scale, history[j], x) * (history[j] - x);
    }
    return -2.0 / (kernel.bandwidth * kernel.bandwidth) * sum;
}

double initial_preimage(std::span<const double> alpha, std::span<const double> history,
                        PreimageInit init, double denominator_floor)
{
    check_lengths(alpha, history);
    if (init == PreimageInit::AlphaWeightedMean) {
        double weight = 0.0;
        double weighted = 0.0;
        for (std::size_t j = 0; j < alpha.size(); ++j) {
            weight += alpha[j];
            weighted += alpha[j] * history[j];
        }
        if (std::abs(weight) > denominator_floor) {
            return weighted / weight;
        }
    }
    return history[0];
}

PreimageResult solve_fixed_point(std::span<const double> alpha, std::span<const double> history,
                                 const KernelConfig& kernel, const PreimageSettings& settings)
{
    check_lengths(alpha, history);
    require_finite(alpha, "pre-image alpha");
    require_finite(history, "pre-image history");
    settings.validate();
    if (!(kernel.bandwidth > 0.0)) {
        throw InvalidInput("pre-image: kernel bandwidth must be positive");
    }

    const double scale = inverse_two_ell_squared(kernel);
    PreimageResult result;
    result.x = initial_preimage(alpha, history, settings.initializer, settings.denominator_floor);
    for (int it = 1; it <= settings.max_iterations; ++it) {
        double numerator = 0.0;
        double denominator = 0.0;
        for (std::size_t j = 0; j < alpha.size(); ++j) {
            const double weight = alpha[j] * evaluate_unchecked(scale, history[j], result.x);
            numerator += weight * history[j];
            denominator += weight;
        }
        if (!(std::abs(denominator) >= settings.denominator_floor)) {
            throw DegenerateDenominator("pre-image: fixed-point denominator below floor");
        }
        const double next = numerator / denominator;
        const double step = std::abs(next - result.x);
        result.x = next;
        result.iterations = it;
        if (step < settings.tolerance) {
            result.converged = true;
            break;
        }
    }
    return result;
}

PreimageResult forecast_preimage(std::span<const double> alpha, std::span<const double> history,
                                 const KernelConfig& kernel, const PreimageSettings& settings)
{
    try {
        return solve_fixed_point(alpha, history, kernel, settings);
    } catch (const DegenerateDenominator&) {
    }
    PreimageSettings retry = settings;
    retry.initializer = PreimageInit::AlphaWeightedMean;
    if (settings.initializer != PreimageInit::AlphaWeightedMean) {
        try {
            return solve_fixed_point(alpha, history, kernel, retry);
        } catch (const DegenerateDenominator&) {
        }
    }
    PreimageResult fallback;
    fallback.x = initial_preimage(alpha, history, PreimageInit::AlphaWeightedMean, settings.denominator_floor);
    return fallback;
}

}  // namespace kear
