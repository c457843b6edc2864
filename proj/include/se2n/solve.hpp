#pragma once

// Interpolation and weighted approximation through per-bin factorizations of the
// Fourier-Bessel blocks. Each bin is solved independently.

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "se2n/transform.hpp"

namespace se2n {

/// Blocks whose estimated condition number exceeds this are rejected.
inline constexpr double kMaxCondition = 1e12;

enum class SolveMode { interpolation, approximation };

inline const char* to_string(SolveMode mode) {
    return mode == SolveMode::interpolation ? "interpolation" : "approximation";
}

class BlockFactorization {
public:
    SolveMode mode() const { return mode_; }
    const FourierBesselBlocks& blocks() const { return *blocks_; }
    const BlocksPtr& blocks_ptr() const { return blocks_; }
    const std::vector<double>& condition_estimates() const { return conditions_; }
    const std::optional<Weights>& weights() const { return weights_; }
    std::size_t N() const { return blocks_->N; }

    /// Matrix the bin-`nhat` factorization was built from: J or J^* J + diag(d^2).
    ComplexMatrix source_matrix(std::size_t nhat) const {
        const ComplexMatrix& J = blocks_->blocks[nhat];
        if (mode_ == SolveMode::interpolation) return J;
        ComplexMatrix A = J.adjoint() * J;
        A.diagonal() += weights_->values().row(static_cast<Eigen::Index>(nhat)).transpose().array().square().matrix();
        return A;
    }

    /// Product of the stored factors for bin `nhat`.
    ComplexMatrix reconstructed(std::size_t nhat) const {
        if (mode_ == SolveMode::interpolation) return lu_[nhat].reconstructedMatrix();
        return llt_[nhat].reconstructedMatrix();
    }

    /// Solves one bin: J v = w (interpolation) or (J^* J + diag(d^2)) v = J^* w (approximation).
    Eigen::VectorXcd solve_bin(std::size_t nhat, const Eigen::VectorXcd& rhs) const {
        if (mode_ == SolveMode::interpolation) return lu_[nhat].solve(rhs);
        return llt_[nhat].solve(blocks_->blocks[nhat].adjoint() * rhs);
    }

private:
    friend BlockFactorization prefactorize(BlocksPtr, SolveMode, std::optional<Weights>, unsigned);

    SolveMode mode_ = SolveMode::interpolation;
    BlocksPtr blocks_;
    std::optional<Weights> weights_;
    std::vector<Eigen::PartialPivLU<ComplexMatrix>> lu_;
    std::vector<Eigen::LLT<ComplexMatrix>> llt_;
    std::vector<double> conditions_;
};

namespace detail {
/// max |t_ii| / min |t_ii| over a triangular factor's diagonal; infinite if a pivot vanishes.
template <class Diagonal>
double diagonal_ratio(const Diagonal& diag) {
    if (diag.size() == 0) return 1.0;
    const double hi = diag.cwiseAbs().maxCoeff();
    const double lo = diag.cwiseAbs().minCoeff();
    if (!(lo > 0.0) || !std::isfinite(hi)) return std::numeric_limits<double>::infinity();
    return hi / lo;
}
}  // namespace detail

/// Factorizes every bin: pivoted LU of J_nhat, or Cholesky of J_nhat^* J_nhat + diag(d(nhat, .)^2).
/// Throws WellPosednessError naming the first bin whose condition estimate exceeds kMaxCondition.
inline BlockFactorization prefactorize(BlocksPtr blocks, SolveMode mode, std::optional<Weights> weights = std::nullopt,
                                       unsigned threads = 1) {
    if (!blocks) throw GridMismatch("prefactorize needs Fourier-Bessel blocks");
    const std::size_t N = blocks->N;
    const auto P = static_cast<Eigen::Index>(blocks->rows());
    const auto Q = static_cast<Eigen::Index>(blocks->cols());

    BlockFactorization f;
    f.mode_ = mode;
    f.blocks_ = blocks;
    f.conditions_.assign(N, 0.0);

    if (mode == SolveMode::interpolation) {
        if (P != Q)
            throw GridMismatch("interpolation needs square blocks, got " + std::to_string(P) + "x" + std::to_string(Q));
        f.lu_.resize(N);
        parallel_for(N, threads, [&](std::size_t nhat) {
            f.lu_[nhat].compute(blocks->blocks[nhat]);
            f.conditions_[nhat] = detail::diagonal_ratio(
                f.lu_[nhat].matrixLU().diagonal());
        });
    } else {
        if (P < Q) throw GridMismatch("approximation needs at least as many spatial as frequency points");
        if (!weights) weights = Weights(Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(N), Q));
        if (static_cast<std::size_t>(weights->values().rows()) != N || weights->values().cols() != Q)
            throw GridMismatch("weights must have shape N x Q");
        f.weights_ = std::move(weights);
        f.llt_.resize(N);
        parallel_for(N, threads, [&](std::size_t nhat) {
            const ComplexMatrix A = f.source_matrix(nhat);
            f.llt_[nhat].compute(A);
            if (f.llt_[nhat].info() != Eigen::Success) {
                f.conditions_[nhat] = std::numeric_limits<double>::infinity();
                return;
            }
            const double r = detail::diagonal_ratio(f.llt_[nhat].matrixL().nestedExpression().diagonal());
            f.conditions_[nhat] = r * r;
        });
    }

    for (std::size_t nhat = 0; nhat < N; ++nhat) {
        if (!(f.conditions_[nhat] <= kMaxCondition)) {
            char buf[128];
            std::snprintf(buf, sizeof buf, "Fourier-Bessel block %zu is singular or ill-conditioned (estimate %.3g)",
                          nhat, f.conditions_[nhat]);
            throw WellPosednessError(buf, nhat, f.conditions_[nhat]);
        }
    }
    return f;
}

namespace detail {
inline void require_matching_samples(const SampleArray& samples, const BlockFactorization& f) {
    if (!same_grid(samples.grid(), f.blocks().spatial))
        throw GridMismatch("samples and factorization use different spatial grids");
}

inline ApCoefficients solve_all_bins(const SampleArray& samples, const BlockFactorization& f, unsigned threads) {
    const ComplexMatrix w = dft_rotation_axis(samples.values(), DftDirection::forward);
    ComplexMatrix v(w.rows(), static_cast<Eigen::Index>(f.blocks().cols()));
    parallel_for(f.N(), threads, [&](std::size_t nhat) {
        const auto n = static_cast<Eigen::Index>(nhat);
        v.row(n) = f.solve_bin(nhat, w.row(n).transpose()).transpose();
    });
    return {dft_rotation_axis(v, DftDirection::inverse), f.blocks().frequency};
}
}  // namespace detail

/// Coefficients whose evaluation on E reproduces `samples`.
inline ApCoefficients interpolate(const SampleArray& samples, const BlockFactorization& f, unsigned threads = 1) {
    if (f.mode() != SolveMode::interpolation) throw GridMismatch("factorization was not built for interpolation");
    detail::require_matching_samples(samples, f);
    return detail::solve_all_bins(samples, f, threads);
}

/// Minimizer of ||diag(d) F v||^2 + ||samples - ev v||^2, F the rotation-axis DFT.
inline ApCoefficients approximate(const SampleArray& samples, const BlockFactorization& f, unsigned threads = 1) {
    if (f.mode() != SolveMode::approximation) throw GridMismatch("factorization was not built for approximation");
    detail::require_matching_samples(samples, f);
    return detail::solve_all_bins(samples, f, threads);
}

/// The functional minimized by approximate(), evaluated through the dense path.
inline double approximation_objective(const ApCoefficients& v, const SampleArray& samples, const Weights& d,
                                      unsigned threads = 1) {
    const ComplexMatrix spectrum = dft_rotation_axis(v.values(), DftDirection::forward);
    const double penalty = (d.values().cast<Complex>().cwiseProduct(spectrum)).squaredNorm();
    const double misfit = (samples.values() - evaluate_naive(v, samples.grid(), threads).values()).squaredNorm();
    return penalty + misfit;
}

}  // namespace se2n
