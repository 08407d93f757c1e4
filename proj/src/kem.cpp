#include "kear/kem.hpp"

#include "kear/error.hpp"
#include "kear/least_squares.hpp"

#include <string>

namespace kear {
namespace {

void check_window(std::size_t n, int order)
{
    if (order < 1) {
        throw InvalidInput("AR order must be at least 1");
    }
    if (n < static_cast<std::size_t>(order) + 1) {
        throw InvalidInput("KEM(" + std::to_string(order) + ") needs at least " +
                           std::to_string(order + 1) + " samples");
    }
}

double frobenius(const Eigen::Ref<const Eigen::MatrixXd>& x, const Eigen::Ref<const Eigen::MatrixXd>& y)
{
    return x.cwiseProduct(y).sum();
}

KemModel solve(const KemSystem& sys, int order, const KernelConfig& kernel)
{
    const LeastSquaresSolution solution = solve_least_squares(sys.a, sys.b);
    KemModel model;
    model.order = order;
    model.coefficients.assign(solution.x.data(), solution.x.data() + solution.x.size());
    model.kernel = kernel;
    model.condition_number = solution.condition_number;
    model.ill_conditioned = solution.ill_conditioned;
    return model;
}

}  // namespace

LagSampleSet build_lag_samples(std::span<const double> series, int order)
{
    check_window(series.size(), order);
    const std::size_t p = static_cast<std::size_t>(order);
    LagSampleSet out;
    out.order = order;
    out.sample_count = series.size() - p;
    out.columns.resize(p + 1);
    for (std::size_t j = 0; j <= p; ++j) {
        out.columns[j].assign(series.begin() + static_cast<std::ptrdiff_t>(p - j),
                              series.begin() + static_cast<std::ptrdiff_t>(p - j + out.sample_count));
    }
    return out;
}

GramBlocks build_gram_blocks(const LagSampleSet& samples, const KernelConfig& kernel)
{
    const int p = samples.order;
    GramBlocks blocks;
    blocks.order = p;
    blocks.h_blocks.reserve(static_cast<std::size_t>(p));
    blocks.k_blocks.reserve(static_cast<std::size_t>(p * p));
    for (int k = 1; k <= p; ++k) {
        blocks.h_blocks.push_back(gram(kernel, samples.lag(k), samples.lag(0)));
    }
    for (int k = 1; k <= p; ++k) {
        for (int j = 1; j <= p; ++j) {
            blocks.k_blocks.push_back(gram(kernel, samples.lag(k), samples.lag(j)));
        }
    }
    return blocks;
}

KemSystem build_kem_system(const GramBlocks& blocks)
{
    const int p = blocks.order;
    KemSystem sys{Eigen::MatrixXd::Zero(p, p), Eigen::VectorXd::Zero(p)};
    for (int i = 1; i <= p; ++i) {
        for (int k = 1; k <= p; ++k) {
            sys.b(i - 1) += frobenius(blocks.h(k), blocks.k(k, i));
            for (int j = i; j <= p; ++j) {
                sys.a(i - 1, j - 1) += frobenius(blocks.k(k, i), blocks.k(k, j));
            }
        }
        for (int j = i + 1; j <= p; ++j) {
            sys.a(j - 1, i - 1) = sys.a(i - 1, j - 1);
        }
    }
    return sys;
}

KemSystem build_kem_system(const Eigen::MatrixXd& series_gram, int order)
{
    const Eigen::Index n = series_gram.rows();
    if (series_gram.cols() != n) {
        throw InvalidInput("KEM: Gram matrix must be square");
    }
    check_window(static_cast<std::size_t>(n), order);
    const Eigen::Index p = order;
    const Eigen::Index m = n - p;

    // Lag-j column block of the k-th block row: rows p-k.., columns p-j.., lag 0 gives H_k.
    KemSystem sys{Eigen::MatrixXd::Zero(p, p), Eigen::VectorXd::Zero(p)};
    for (Eigen::Index k = 1; k <= p; ++k) {
        const auto rows = series_gram.middleRows(p - k, m);
        const auto h_block = rows.middleCols(p, m);
        for (Eigen::Index i = 1; i <= p; ++i) {
            const auto ki = rows.middleCols(p - i, m);
            sys.b(i - 1) += frobenius(h_block, ki);
            for (Eigen::Index j = i; j <= p; ++j) {
                sys.a(i - 1, j - 1) += frobenius(ki, rows.middleCols(p - j, m));
            }
        }
    }
    sys.a.triangularView<Eigen::StrictlyLower>() = sys.a.transpose();
    return sys;
}

KemModel fit_kem(const Eigen::MatrixXd& series_gram, int order, const KernelConfig& kernel)
{
    const KemSystem sys = build_kem_system(series_gram, order);
    KemModel model = solve(sys, order, kernel);

    // One refinement step. The residual H_k - sum_j alpha_j K_kj is formed on the
    // blocks, so its accuracy does not suffer from the squared conditioning of A.
    const Eigen::Index p = order;
    const Eigen::Index m = series_gram.rows() - p;
    const Eigen::Map<const Eigen::VectorXd> alpha(model.coefficients.data(), p);
    Eigen::VectorXd gradient = Eigen::VectorXd::Zero(p);
    Eigen::MatrixXd residual(m, m);
    for (Eigen::Index k = 1; k <= p; ++k) {
        const auto rows = series_gram.middleRows(p - k, m);
        residual = rows.middleCols(p, m);
        for (Eigen::Index j = 1; j <= p; ++j) {
            residual.noalias() -= alpha(j - 1) * rows.middleCols(p - j, m);
        }
        for (Eigen::Index i = 1; i <= p; ++i) {
            gradient(i - 1) += frobenius(rows.middleCols(p - i, m), residual);
        }
    }
    const Eigen::VectorXd correction = solve_least_squares(sys.a, gradient).x;
    for (Eigen::Index j = 0; j < p; ++j) {
        model.coefficients[static_cast<std::size_t>(j)] += correction(j);
    }
    return model;
}

KemModel fit_kem(std::span<const double> series, int order, const KernelConfig& kernel)
{
    check_window(series.size(), order);
    return fit_kem(gram(kernel, series, series), order, kernel);
}

PreimageResult predict_kem(const KemModel& model, std::span<const double> history,
                           const PreimageSettings& settings)
{
    if (history.size() != model.coefficients.size()) {
        throw InvalidInput("predict_kem: history must hold exactly p values");
    }
    return forecast_preimage(model.coefficients, history, model.kernel, settings);
}

}  // namespace kear
