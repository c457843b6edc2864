#pragma once

// Generalized Bessel functions of SE(2,N) and the discrete Fourier-Bessel blocks.

#include <bit>
#include <cmath>
#include <complex>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <memory>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "se2n/errors.hpp"
#include "se2n/grid.hpp"
#include "se2n/parallel.hpp"

namespace se2n {

using Complex = std::complex<double>;
using ComplexMatrix = Eigen::MatrixXcd;

namespace detail {

/// conj(chi_q) = e^{-2 pi i q / N} for q in [0, N).
inline std::vector<Complex> conjugate_characters(std::size_t N) {
    std::vector<Complex> table(N);
    for (std::size_t q = 0; q < N; ++q)
        table[q] = std::polar(1.0, -kTwoPi * static_cast<double>(q) / static_cast<double>(N));
    return table;
}

/// e^{i x cos(delta + 2 pi r / N)} for r in [0, N).
inline void kernel_phases(double x, double delta, std::size_t N, std::vector<Complex>& out) {
    out.resize(N);
    for (std::size_t r = 0; r < N; ++r)
        out[r] = std::polar(1.0, x * std::cos(delta + kTwoPi * static_cast<double>(r) / static_cast<double>(N)));
}

/// Character-weighted sum over the rotation index, ascending r.
inline Complex bessel_sum(std::size_t nhat, const std::vector<Complex>& phases, const std::vector<Complex>& chars) {
    const std::size_t N = phases.size();
    Complex acc{0.0, 0.0};
    std::size_t q = 0;  // (nhat * r) mod N
    for (std::size_t r = 0; r < N; ++r) {
        acc += phases[r] * chars[q];
        q += nhat;
        if (q >= N) q -= N;
    }
    return acc;
}

}  // namespace detail

/// J_nhat(lambda, y) = sum_r exp(i xi rho cos(alpha - omega + 2 pi r / N)) exp(-2 pi i nhat r / N).
/// No slice-range checks are made on lambda or y; nhat is reduced mod N.
inline Complex generalized_bessel(std::size_t nhat, const SlicePoint& lambda, const SlicePoint& y, std::size_t N) {
    if (N == 0) throw DomainError("number of rotations N must be positive");
    std::vector<Complex> phases;
    detail::kernel_phases(lambda.radius * y.radius, y.angle - lambda.angle, N, phases);
    return detail::bessel_sum(nhat % N, phases, detail::conjugate_characters(N));
}

/// One P x Q block per DFT bin along the rotation axis; block nhat, entry (j, k) = J_nhat(lambda_k, y_j).
struct FourierBesselBlocks {
    std::size_t N = 0;
    std::vector<ComplexMatrix> blocks;
    GridPtr spatial;
    GridPtr frequency;

    std::size_t rows() const { return blocks.empty() ? 0 : static_cast<std::size_t>(blocks.front().rows()); }
    std::size_t cols() const { return blocks.empty() ? 0 : static_cast<std::size_t>(blocks.front().cols()); }
};

using BlocksPtr = std::shared_ptr<const FourierBesselBlocks>;

/// Fills every block entry from the scalar kernel. Each (j, k) pair shares its N phase factors across bins.
inline FourierBesselBlocks assemble_blocks(GridPtr E, GridPtr F, unsigned threads = 1) {
    if (!E || !F) throw GridMismatch("assemble_blocks needs both grids");
    if (E->N() != F->N())
        throw GridMismatch("spatial grid has N=" + std::to_string(E->N()) + " but frequency grid has N=" +
                           std::to_string(F->N()));
    if (E->kind() != GridKind::spatial) throw GridMismatch("first grid must be spatial");
    if (F->kind() != GridKind::frequency) throw GridMismatch("second grid must be a frequency grid");

    const std::size_t N = E->N();
    const std::size_t P = E->size();
    const std::size_t Q = F->size();
    FourierBesselBlocks out;
    out.N = N;
    out.spatial = E;
    out.frequency = F;
    out.blocks.assign(N, ComplexMatrix(static_cast<Eigen::Index>(P), static_cast<Eigen::Index>(Q)));

    const auto chars = detail::conjugate_characters(N);
    parallel_for(P, threads, [&](std::size_t j) {
        std::vector<Complex> phases;
        const SlicePoint& y = (*E)[j];
        for (std::size_t k = 0; k < Q; ++k) {
            const SlicePoint& lam = (*F)[k];
            detail::kernel_phases(lam.radius * y.radius, y.angle - lam.angle, N, phases);
            for (std::size_t nhat = 0; nhat < N; ++nhat)
                out.blocks[nhat](static_cast<Eigen::Index>(j), static_cast<Eigen::Index>(k)) =
                    detail::bessel_sum(nhat, phases, chars);
        }
    });
    return out;
}

/// Classical J_n(x) from the periodic integral (1/2pi) Re[(-i)^n int_0^{2pi} e^{i(x cos g - n g)} dg],
/// by trapezoidal sums with doubling node counts until two successive sums agree to 1e-12.
inline double classical_bessel(int n, double x) {
    if (!std::isfinite(x) || std::abs(x) > 1e4) throw DomainError("classical_bessel: |x| must be at most 1e4");
    // (-i)^n
    static constexpr Complex kMinusIPow[4] = {{1, 0}, {0, -1}, {-1, 0}, {0, 1}};
    const Complex rot = kMinusIPow[((n % 4) + 4) % 4];

    auto trapezoid = [&](std::size_t nodes) {
        Complex acc{0.0, 0.0};
        const double h = kTwoPi / static_cast<double>(nodes);
        for (std::size_t t = 0; t < nodes; ++t) {
            const double g = h * static_cast<double>(t);
            acc += std::polar(1.0, x * std::cos(g) - static_cast<double>(n) * g);
        }
        return (rot * acc).real() / static_cast<double>(nodes);
    };

    std::size_t nodes = 16;
    // The periodic trapezoid rule only becomes accurate once nodes exceed |x| + |n|.
    while (static_cast<double>(nodes) < std::abs(x) + std::abs(static_cast<double>(n)) + 16.0) nodes *= 2;
    double prev = trapezoid(nodes);
    for (int guard = 0; guard < 12; ++guard) {
        nodes *= 2;
        const double cur = trapezoid(nodes);
        if (std::abs(cur - prev) <= 1e-12) return cur;
        prev = cur;
    }
    return prev;
}

/// |(1/N) J_nhat((xr, 0), (1, delta)) - i^nhat e^{i nhat delta} J_nhat(xr)|.
/// The 1/N-scaled sum is a Riemann sum of the Bessel integral, so this vanishes as N grows.
inline double kernel_limit_error(std::size_t nhat, double xr, double delta, std::size_t N) {
    const Complex scaled = generalized_bessel(nhat, SlicePoint{xr, 0.0}, SlicePoint{1.0, delta}, N) /
                           static_cast<double>(N);
    static constexpr Complex kIPow[4] = {{1, 0}, {0, 1}, {-1, 0}, {0, -1}};
    const int n = static_cast<int>(nhat);
    const Complex target =
        kIPow[nhat % 4] * std::polar(1.0, static_cast<double>(n) * delta) * classical_bessel(n, xr);
    return std::abs(scaled - target);
}

// -- binary export -----------------------------------------------------------
// Header: N, P, Q as u64 little-endian. Payload: N*P*Q (re, im) f64 little-endian, block-major, row-major.

static_assert(std::endian::native == std::endian::little, "binary formats assume a little-endian host");

namespace detail {
inline void write_u64(std::ostream& out, std::uint64_t v) { out.write(reinterpret_cast<const char*>(&v), 8); }
inline std::uint64_t read_u64(std::istream& in) {
    std::uint64_t v = 0;
    in.read(reinterpret_cast<char*>(&v), 8);
    if (!in) throw ParseError("truncated binary header");
    return v;
}
inline void write_complex(std::ostream& out, Complex c) {
    const double re = c.real();
    const double im = c.imag();
    out.write(reinterpret_cast<const char*>(&re), 8);
    out.write(reinterpret_cast<const char*>(&im), 8);
}
inline Complex read_complex(std::istream& in) {
    double re = 0.0;
    double im = 0.0;
    in.read(reinterpret_cast<char*>(&re), 8);
    in.read(reinterpret_cast<char*>(&im), 8);
    if (!in) throw ParseError("truncated binary payload");
    return {re, im};
}
}  // namespace detail

inline void save_blocks(const FourierBesselBlocks& fb, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error("cannot write " + path);
    detail::write_u64(out, fb.N);
    detail::write_u64(out, fb.rows());
    detail::write_u64(out, fb.cols());
    for (const auto& b : fb.blocks)
        for (Eigen::Index j = 0; j < b.rows(); ++j)
            for (Eigen::Index k = 0; k < b.cols(); ++k) detail::write_complex(out, b(j, k));
    if (!out) throw Error("failed writing " + path);
}

/// Reads the raw block matrices; the grid references are left empty.
inline FourierBesselBlocks load_blocks(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ParseError("cannot open " + path);
    FourierBesselBlocks fb;
    fb.N = detail::read_u64(in);
    const auto P = static_cast<Eigen::Index>(detail::read_u64(in));
    const auto Q = static_cast<Eigen::Index>(detail::read_u64(in));
    fb.blocks.assign(fb.N, ComplexMatrix(P, Q));
    for (auto& b : fb.blocks)
        for (Eigen::Index j = 0; j < P; ++j)
            for (Eigen::Index k = 0; k < Q; ++k) b(j, k) = detail::read_complex(in);
    return fb;
}

}  // namespace se2n
