#pragma once

// Coefficient and sample arrays for almost-periodic functions with rotation-invariant
// frequency sets, and the dense and factorized evaluation operators between them.

#include <cmath>
#include <string>
#include <utility>

#include "se2n/bessel.hpp"
#include "se2n/dft.hpp"

namespace se2n {

namespace detail {
inline void require_finite(const ComplexMatrix& m, const char* what) {
    if (!m.allFinite()) throw DomainError(std::string(what) + " contains non-finite entries");
}

inline bool same_grid(const GridPtr& a, const GridPtr& b) { return a == b || (a && b && *a == *b); }
}  // namespace detail

/// Entry (m, k) is the coefficient of frequency R_{2 pi m / N} lambda_k.
class ApCoefficients {
public:
    ApCoefficients(ComplexMatrix values, GridPtr frequency_grid)
        : values_(std::move(values)), grid_(std::move(frequency_grid)) {
        if (!grid_) throw GridMismatch("coefficients need a frequency grid");
        if (grid_->kind() != GridKind::frequency) throw GridMismatch("coefficients need a frequency grid");
        if (static_cast<std::size_t>(values_.rows()) != grid_->N() ||
            static_cast<std::size_t>(values_.cols()) != grid_->size())
            throw GridMismatch("coefficient matrix shape does not match its frequency grid");
        detail::require_finite(values_, "coefficient matrix");
    }

    static ApCoefficients zero(GridPtr frequency_grid) {
        const auto rows = static_cast<Eigen::Index>(frequency_grid->N());
        const auto cols = static_cast<Eigen::Index>(frequency_grid->size());
        return {ComplexMatrix::Zero(rows, cols), std::move(frequency_grid)};
    }

    const ComplexMatrix& values() const { return values_; }
    const GridPtr& grid() const { return grid_; }
    std::size_t N() const { return grid_->N(); }

private:
    ComplexMatrix values_;
    GridPtr grid_;
};

/// Entry (n, j) is f(R_{2 pi n / N} y_j).
class SampleArray {
public:
    SampleArray(ComplexMatrix values, GridPtr spatial_grid) : values_(std::move(values)), grid_(std::move(spatial_grid)) {
        if (!grid_) throw GridMismatch("samples need a spatial grid");
        if (grid_->kind() != GridKind::spatial) throw GridMismatch("samples need a spatial grid");
        if (static_cast<std::size_t>(values_.rows()) != grid_->N() ||
            static_cast<std::size_t>(values_.cols()) != grid_->size())
            throw GridMismatch("sample matrix shape does not match its spatial grid");
        detail::require_finite(values_, "sample matrix");
    }

    const ComplexMatrix& values() const { return values_; }
    const GridPtr& grid() const { return grid_; }
    std::size_t N() const { return grid_->N(); }

private:
    ComplexMatrix values_;
    GridPtr grid_;
};

/// Nonnegative penalty weights d(nhat, k), one per DFT bin and frequency slice point.
class Weights {
public:
    explicit Weights(Eigen::MatrixXd values) : values_(std::move(values)) {
        if (!values_.allFinite() || (values_.size() > 0 && values_.minCoeff() < 0.0))
            throw DomainError("weights must be finite and nonnegative");
    }

    /// Replicates one weight per frequency slice point across all N bins.
    static Weights radial(const Eigen::VectorXd& per_frequency, std::size_t N) {
        Eigen::MatrixXd m(static_cast<Eigen::Index>(N), per_frequency.size());
        for (Eigen::Index n = 0; n < m.rows(); ++n) m.row(n) = per_frequency.transpose();
        return Weights(std::move(m));
    }

    const Eigen::MatrixXd& values() const { return values_; }

private:
    Eigen::MatrixXd values_;
};

/// The piecewise weight profile alpha/10 for |Lambda| <= 1, alpha for 1 < |Lambda| <= 3/2, 100 alpha beyond.
inline double radial_weight(double frequency_radius, double alpha) {
    if (frequency_radius <= 1.0) return alpha / 10.0;
    if (frequency_radius <= 1.5) return alpha;
    return 100.0 * alpha;
}

inline Weights radial_weights(const RotInvariantGrid& F, double alpha) {
    Eigen::VectorXd d(static_cast<Eigen::Index>(F.size()));
    for (std::size_t k = 0; k < F.size(); ++k) d(static_cast<Eigen::Index>(k)) = radial_weight(F[k].radius, alpha);
    return Weights::radial(d, F.N());
}

inline Weights zero_weights(const RotInvariantGrid& F) {
    return Weights(Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(F.N()), static_cast<Eigen::Index>(F.size())));
}

/// f(x) = sum_{m,k} exp(i <R_{2 pi m / N} lambda_k, x>) coeffs(m, k), for any planar x.
inline Complex evaluate_at_point(const ApCoefficients& coeffs, Vec2 x) {
    const RotInvariantGrid& F = *coeffs.grid();
    const auto& c = coeffs.values();
    Complex acc{0.0, 0.0};
    for (std::size_t m = 0; m < F.N(); ++m)
        for (std::size_t k = 0; k < F.size(); ++k)
            acc += std::polar(1.0, dot(F.point(m, k), x)) *
                   c(static_cast<Eigen::Index>(m), static_cast<Eigen::Index>(k));
    return acc;
}

/// Dense O(N^2 P Q) evaluation on every point of E. Reference for the factorized path.
inline SampleArray evaluate_naive(const ApCoefficients& coeffs, GridPtr E, unsigned threads = 1) {
    if (!E) throw GridMismatch("evaluate_naive needs a spatial grid");
    if (E->N() != coeffs.N())
        throw GridMismatch("spatial grid N=" + std::to_string(E->N()) + " differs from coefficient N=" +
                           std::to_string(coeffs.N()));
    const RotInvariantGrid& F = *coeffs.grid();
    const auto freqs = F.expand();
    const auto N = static_cast<Eigen::Index>(E->N());
    const auto P = static_cast<Eigen::Index>(E->size());
    const auto Q = static_cast<Eigen::Index>(F.size());
    const auto& c = coeffs.values();
    ComplexMatrix out(N, P);
    parallel_for(static_cast<std::size_t>(N * P), threads, [&](std::size_t idx) {
        const auto n = static_cast<Eigen::Index>(idx) / P;
        const auto j = static_cast<Eigen::Index>(idx) % P;
        const Vec2 x = E->point(static_cast<std::size_t>(n), static_cast<std::size_t>(j));
        Complex acc{0.0, 0.0};
        for (Eigen::Index m = 0; m < N; ++m)
            for (Eigen::Index k = 0; k < Q; ++k)
                acc += std::polar(1.0, dot(freqs[static_cast<std::size_t>(m * Q + k)], x)) * c(m, k);
        out(n, j) = acc;
    });
    return {std::move(out), std::move(E)};
}

/// Applies J_nhat bin by bin to the forward rotation-axis DFT of the coefficients, then inverts the DFT.
inline SampleArray evaluate_fast(const ApCoefficients& coeffs, const FourierBesselBlocks& fb, unsigned threads = 1) {
    if (!detail::same_grid(coeffs.grid(), fb.frequency))
        throw GridMismatch("coefficients and Fourier-Bessel blocks use different frequency grids");
    const ComplexMatrix spectrum = dft_rotation_axis(coeffs.values(), DftDirection::forward);
    ComplexMatrix mapped(spectrum.rows(), static_cast<Eigen::Index>(fb.rows()));
    parallel_for(fb.N, threads, [&](std::size_t nhat) {
        const auto n = static_cast<Eigen::Index>(nhat);
        mapped.row(n).noalias() = (fb.blocks[nhat] * spectrum.row(n).transpose()).transpose();
    });
    return {dft_rotation_axis(mapped, DftDirection::inverse), fb.spatial};
}

/// out(n, k) = coeffs((n - m) mod N, k): the function rotated by 2 pi m / N.
inline ApCoefficients rotate_coefficients(const ApCoefficients& coeffs, long long m) {
    const auto N = static_cast<long long>(coeffs.N());
    const auto& c = coeffs.values();
    ComplexMatrix out(c.rows(), c.cols());
    for (long long n = 0; n < N; ++n) {
        const long long src = (((n - m) % N) + N) % N;
        out.row(static_cast<Eigen::Index>(n)) = c.row(static_cast<Eigen::Index>(src));
    }
    return {std::move(out), coeffs.grid()};
}

/// out(m, k) = exp(-i <R_{2 pi m / N} lambda_k, shift>) coeffs(m, k): the function translated by `shift`.
inline ApCoefficients translate_coefficients(const ApCoefficients& coeffs, Vec2 shift) {
    const RotInvariantGrid& F = *coeffs.grid();
    ComplexMatrix out = coeffs.values();
    for (std::size_t m = 0; m < F.N(); ++m)
        for (std::size_t k = 0; k < F.size(); ++k)
            out(static_cast<Eigen::Index>(m), static_cast<Eigen::Index>(k)) *= std::polar(1.0, -dot(F.point(m, k), shift));
    return {std::move(out), coeffs.grid()};
}

/// Circular shift along the rotation axis: out(n, .) = in((n - m) mod N, .).
inline ComplexMatrix shift_rotation_axis(const ComplexMatrix& in, long long m) {
    const auto N = static_cast<long long>(in.rows());
    ComplexMatrix out(in.rows(), in.cols());
    for (long long n = 0; n < N; ++n)
        out.row(static_cast<Eigen::Index>(n)) = in.row(static_cast<Eigen::Index>((((n - m) % N) + N) % N));
    return out;
}

}  // namespace se2n
