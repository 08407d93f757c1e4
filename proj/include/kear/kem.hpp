#pragma once

#include "kear/kernel.hpp"
#include "kear/preimage.hpp"

#include <Eigen/Dense>

#include <span>
#include <vector>

namespace kear {

/// Lagged sample pairs realized by sliding over one training window.
/// columns[j][l] = x[p + l - j] (0-based), for lags j = 0..p and l = 0..m-1.
struct LagSampleSet {
    int order = 0;
    std::size_t sample_count = 0;
    std::vector<std::vector<double>> columns;

    [[nodiscard]] std::span<const double> lag(int j) const { return columns.at(static_cast<std::size_t>(j)); }
};

/// Requires n >= p + 1, giving m = n - p >= 1 pairs per lag.
LagSampleSet build_lag_samples(std::span<const double> series, int order);

/// Finite-sample stand-ins for the cross-covariance operators:
/// H_k = gram(lag k, lag 0) and K_kj = gram(lag k, lag j) for k, j in 1..p.
struct GramBlocks {
    int order = 0;
    std::vector<Eigen::MatrixXd> h_blocks;  // index k-1
    std::vector<Eigen::MatrixXd> k_blocks;  // index (k-1) * p + (j-1)

    [[nodiscard]] const Eigen::MatrixXd& h(int k) const { return h_blocks.at(static_cast<std::size_t>(k - 1)); }
    [[nodiscard]] const Eigen::MatrixXd& k(int row, int col) const
    {
        return k_blocks.at(static_cast<std::size_t>((row - 1) * order + (col - 1)));
    }
};

GramBlocks build_gram_blocks(const LagSampleSet& samples, const KernelConfig& kernel);

/// Least-squares system A alpha = b with
/// A_ij = sum_k tr(K_ki^T K_kj) and b_i = sum_k tr(H_k^T K_ki).
struct KemSystem {
    Eigen::MatrixXd a;
    Eigen::VectorXd b;
};

KemSystem build_kem_system(const GramBlocks& blocks);

/// Same system without materializing blocks: every block is a submatrix of the
/// Gram matrix of the window against itself.
KemSystem build_kem_system(const Eigen::MatrixXd& series_gram, int order);

struct KemModel {
    int order = 0;
    std::vector<double> coefficients;
    KernelConfig kernel;
    double condition_number = 1.0;
    bool ill_conditioned = false;
};

/// Requires n >= p + 1. Rank-deficient systems return the minimum-norm solution
/// with ill_conditioned set.
KemModel fit_kem(std::span<const double> series, int order, const KernelConfig& kernel);
KemModel fit_kem(const Eigen::MatrixXd& series_gram, int order, const KernelConfig& kernel);

/// Pre-image of sum_j alpha_j phi(history[j]); history is most-recent-first.
PreimageResult predict_kem(const KemModel& model, std::span<const double> history,
                           const PreimageSettings& settings = {});

}  // namespace kear
