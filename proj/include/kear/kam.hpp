#pragma once

#include "kear/kernel.hpp"
#include "kear/preimage.hpp"

#include <Eigen/Dense>

#include <span>
#include <vector>

namespace kear {

/// Kernel autoregressive model fitted by Yule-Walker equations on expected kernel values.
struct KamModel {
    int order = 0;
    std::vector<double> coefficients;  // alpha_1..alpha_p
    KernelConfig kernel;
    std::vector<double> training_tail;  // last p training values, most-recent-first
    double condition_number = 1.0;
    bool ill_conditioned = false;
};

/// R alpha = r with r_k = mean_t k(x_t, x_{t-k}) and R_kj = mean_t k(x_{t-j}, x_{t-k}),
/// both averaged over the common range t = p+1..n.
struct KamSystem {
    Eigen::MatrixXd r_matrix;
    Eigen::VectorXd r_vector;
};

KamSystem build_kam_system(std::span<const double> series, int order, const KernelConfig& kernel);

/// Same system read off a precomputed Gram matrix of the series against itself.
KamSystem build_kam_system(const Eigen::MatrixXd& series_gram, int order);

/// Requires n >= 2p + 1. Rank-deficient systems fall back to the minimum-norm solution.
KamModel fit_kam(std::span<const double> series, int order, const KernelConfig& kernel);
KamModel fit_kam(std::span<const double> series, const Eigen::MatrixXd& series_gram, int order,
                 const KernelConfig& kernel);

/// Pre-image of sum_j alpha_j phi(history[j]); history is most-recent-first.
PreimageResult predict_kam(const KamModel& model, std::span<const double> history,
                           const PreimageSettings& settings = {});

}  // namespace kear
