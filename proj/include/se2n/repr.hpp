#pragma once

// The N-dimensional representations T^lambda(k, x) = diag_h(e^{i <R_h lambda, x>}) S(k) of
// Z_N x| R^2, with executable checks of the representation, unitarity, irreducibility
// and matrix-coefficient identities.

#include <cmath>
#include <numeric>
#include <vector>

#include "se2n/bessel.hpp"

namespace se2n {

/// (k, x) with group law (k, x)(h, y) = (k + h mod N, x + R_{2 pi k / N} y).
struct GroupElement {
    std::size_t rotation = 0;
    Vec2 translation;
};

inline GroupElement make_element(long long rotation, Vec2 translation, std::size_t N) {
    const auto n = static_cast<long long>(N);
    return {static_cast<std::size_t>(((rotation % n) + n) % n), translation};
}

inline GroupElement compose(const GroupElement& a, const GroupElement& b, std::size_t N) {
    return {(a.rotation + b.rotation) % N,
            a.translation + rotate(b.translation, static_cast<long long>(a.rotation), N)};
}

inline GroupElement inverse(const GroupElement& g, std::size_t N) {
    return {(N - g.rotation % N) % N, -rotate(g.translation, -static_cast<long long>(g.rotation), N)};
}

/// Entry (h, h') = e^{i <R_{2 pi h / N} lambda, x>} when h' = h - k mod N, zero otherwise.
inline ComplexMatrix rep_matrix(Vec2 lambda, const GroupElement& g, std::size_t N) {
    if (norm(lambda) == 0.0) throw TrivialStabilizer("representation parameter lambda must be nonzero");
    const auto n = static_cast<Eigen::Index>(N);
    ComplexMatrix T = ComplexMatrix::Zero(n, n);
    for (std::size_t h = 0; h < N; ++h) {
        const std::size_t col = (h + N - g.rotation % N) % N;
        T(static_cast<Eigen::Index>(h), static_cast<Eigen::Index>(col)) =
            std::polar(1.0, dot(rotate(lambda, static_cast<long long>(h), N), g.translation));
    }
    return T;
}

/// max |T(a) T(b) - T(ab)|
inline double check_homomorphism(Vec2 lambda, const GroupElement& a, const GroupElement& b, std::size_t N) {
    const ComplexMatrix lhs = rep_matrix(lambda, a, N) * rep_matrix(lambda, b, N);
    return (lhs - rep_matrix(lambda, compose(a, b, N), N)).cwiseAbs().maxCoeff();
}

/// max |T(g)^* T(g) - I|
inline double check_unitary(Vec2 lambda, const GroupElement& g, std::size_t N) {
    const ComplexMatrix T = rep_matrix(lambda, g, N);
    const auto n = static_cast<Eigen::Index>(N);
    return (T.adjoint() * T - ComplexMatrix::Identity(n, n)).cwiseAbs().maxCoeff();
}

namespace detail {
/// Distance of t from the lattice 2 pi Z.
inline double distance_to_2pi_lattice(double t) {
    const double r = std::remainder(t, kTwoPi);
    return std::abs(r);
}
}  // namespace detail

/// Throws InsufficientSample unless `sample` holds a pure rotation generating Z_N, two linearly
/// independent pure translations, and translations separating every pair of diagonal phases.
inline void check_commutant_sample(Vec2 lambda, const std::vector<GroupElement>& sample, std::size_t N) {
    bool has_generator = false;
    std::vector<Vec2> translations;
    for (const auto& g : sample) {
        if (g.translation == Vec2{} && std::gcd(g.rotation % N, N) == 1) has_generator = true;
        if (g.rotation % N == 0 && !(g.translation == Vec2{})) translations.push_back(g.translation);
    }
    if (!has_generator) throw InsufficientSample("sample has no pure rotation generating Z_N");

    bool independent = false;
    for (std::size_t a = 0; a < translations.size() && !independent; ++a)
        for (std::size_t b = a + 1; b < translations.size() && !independent; ++b) {
            const double cross = translations[a].x * translations[b].y - translations[a].y * translations[b].x;
            independent = std::abs(cross) > 1e-12 * norm(translations[a]) * norm(translations[b]);
        }
    if (!independent) throw InsufficientSample("sample needs two linearly independent pure translations");

    for (std::size_t h = 0; h < N; ++h)
        for (std::size_t hp = h + 1; hp < N; ++hp) {
            const Vec2 diff = rotate(lambda, static_cast<long long>(h), N) - rotate(lambda, static_cast<long long>(hp), N);
            bool separated = false;
            for (const auto& x : translations)
                if (detail::distance_to_2pi_lattice(dot(diff, x)) > 1e-6) separated = true;
            if (!separated) throw InsufficientSample("no sampled translation separates diagonal phases " +
                                                     std::to_string(h) + " and " + std::to_string(hp));
        }
}

/// Dimension of {M : M T(g) = T(g) M for all g in sample}, as the numerical nullity
/// (singular values below 1e-9 of the largest) of the stacked commutation equations.
inline std::size_t commutant_dimension(Vec2 lambda, const std::vector<GroupElement>& sample, std::size_t N) {
    if (norm(lambda) == 0.0) throw TrivialStabilizer("representation parameter lambda must be nonzero");
    check_commutant_sample(lambda, sample, N);
    const auto n = static_cast<Eigen::Index>(N);
    const auto unknowns = n * n;
    ComplexMatrix system(static_cast<Eigen::Index>(sample.size()) * unknowns, unknowns);
    const ComplexMatrix I = ComplexMatrix::Identity(n, n);
    for (std::size_t s = 0; s < sample.size(); ++s) {
        const ComplexMatrix T = rep_matrix(lambda, sample[s], N);
        // column-major vec: vec(M T) = (T^t (x) I) vec(M), vec(T M) = (I (x) T) vec(M)
        auto rows = system.middleRows(static_cast<Eigen::Index>(s) * unknowns, unknowns);
        for (Eigen::Index a = 0; a < n; ++a)
            for (Eigen::Index b = 0; b < n; ++b)
                rows.block(a * n, b * n, n, n) = T(b, a) * I - (a == b ? T : ComplexMatrix::Zero(n, n));
    }
    Eigen::BDCSVD<ComplexMatrix> svd(system);
    const auto& sv = svd.singularValues();
    const double cutoff = 1e-9 * sv(0);
    std::size_t nullity = static_cast<std::size_t>(unknowns - sv.size());
    for (Eigen::Index i = 0; i < sv.size(); ++i)
        if (sv(i) <= cutoff) ++nullity;
    return nullity;
}

/// |t_{mhat, nhat}(g) - e^{-2 pi i nhat k / N} e^{2 pi i (nhat - mhat) h / N} J_{nhat - mhat}(lambda, y)|
/// for g = (k, R_{2 pi h / N} y). The matrix coefficient is taken against unnormalized characters:
/// t = sum_l (T(g) chi_nhat)(l) conj(chi_mhat(l)).
inline double matrix_coefficient_check(const SlicePoint& lambda, std::size_t mhat, std::size_t nhat, std::size_t k,
                                       std::size_t h, const SlicePoint& y, std::size_t N) {
    const GroupElement g{k % N, rotate(y.cartesian(), static_cast<long long>(h), N)};
    const ComplexMatrix T = rep_matrix(lambda.cartesian(), g, N);
    const auto n = static_cast<Eigen::Index>(N);
    Eigen::VectorXcd chi_n(n);
    Eigen::VectorXcd chi_m(n);
    for (Eigen::Index l = 0; l < n; ++l) {
        chi_n(l) = std::polar(1.0, rotation_angle(static_cast<long long>(nhat) * l, N));
        chi_m(l) = std::polar(1.0, rotation_angle(static_cast<long long>(mhat) * l, N));
    }
    const Complex direct = chi_m.dot(T * chi_n);  // conjugates chi_m
    const std::size_t diff = (nhat % N + N - mhat % N) % N;
    const Complex formula = std::polar(1.0, -rotation_angle(static_cast<long long>(nhat * k), N)) *
                            std::polar(1.0, rotation_angle(static_cast<long long>(diff * h), N)) *
                            generalized_bessel(diff, lambda, y, N);
    return std::abs(direct - formula);
}

}  // namespace se2n
