#include <gtest/gtest.h>

#include <random>

#include "oracles.hpp"
#include "se2n/repr.hpp"

using namespace se2n;

namespace {

template <class Rng>
Vec2 random_vec(Rng& rng, double scale) {
    std::uniform_real_distribution<double> u(-scale, scale);
    return {u(rng), u(rng)};
}

template <class Rng>
GroupElement random_element(std::size_t N, Rng& rng) {
    return make_element(static_cast<long long>(rng() % 1000), random_vec(rng, 3.0), N);
}

template <class Rng>
std::vector<GroupElement> generic_sample(std::size_t N, Rng& rng) {
    std::uniform_real_distribution<double> u(0.7, 1.9);
    return {make_element(1, {}, N), make_element(0, {u(rng), 0.0}, N), make_element(0, {0.0, u(rng)}, N),
            random_element(N, rng)};
}

}  // namespace

TEST(RepMatrix, IdentityElement) {
    const auto T = rep_matrix({0.4, -1.1}, {}, 5);
    EXPECT_EQ(T, ComplexMatrix::Identity(5, 5));
}

TEST(RepMatrix, PureRotationIsCyclicShift) {
    const std::size_t N = 6;
    for (long long k = 0; k < 6; ++k) {
        const auto T = rep_matrix({1.0, 0.0}, make_element(k, {}, N), N);
        for (std::size_t h = 0; h < N; ++h)
            for (std::size_t hp = 0; hp < N; ++hp) {
                const double expected = hp == (h + N - static_cast<std::size_t>(k)) % N ? 1.0 : 0.0;
                EXPECT_EQ(T(static_cast<Eigen::Index>(h), static_cast<Eigen::Index>(hp)), Complex(expected, 0.0));
            }
    }
}

TEST(RepMatrix, HalfTurnHandValue) {
    const auto T = rep_matrix({1.0, 0.0}, make_element(0, {std::numbers::pi, 0.0}, 2), 2);
    EXPECT_LT((T + ComplexMatrix::Identity(2, 2)).cwiseAbs().maxCoeff(), 1e-15);
}

TEST(RepMatrix, TranslationsAreDiagonal) {
    std::mt19937_64 rng(1);
    const auto T = rep_matrix({0.3, 0.8}, make_element(0, random_vec(rng, 4.0), 7), 7);
    EXPECT_EQ((T - ComplexMatrix(T.diagonal().asDiagonal())).norm(), 0.0);
}

TEST(RepMatrix, ZeroFrequencyRejected) {
    EXPECT_THROW(rep_matrix({0.0, 0.0}, {}, 3), TrivialStabilizer);
}

TEST(GroupLaw, InverseAndAssociativity) {
    std::mt19937_64 rng(2);
    for (std::size_t N : {1u, 3u, 8u}) {
        const auto a = random_element(N, rng);
        const auto b = random_element(N, rng);
        const auto c = random_element(N, rng);
        const auto e = compose(a, inverse(a, N), N);
        EXPECT_EQ(e.rotation, 0u);
        EXPECT_LT(norm(e.translation), 1e-14);
        const auto lhs = compose(compose(a, b, N), c, N);
        const auto rhs = compose(a, compose(b, c, N), N);
        EXPECT_EQ(lhs.rotation, rhs.rotation);
        EXPECT_LT(norm(lhs.translation - rhs.translation), 1e-13);
    }
}

TEST(Homomorphism, IdentityIsExact) {
    std::mt19937_64 rng(3);
    const auto g = random_element(5, rng);
    EXPECT_EQ(check_homomorphism({1.0, 0.5}, g, {}, 5), 0.0);
}

TEST(Homomorphism, InverseGivesIdentity) {
    std::mt19937_64 rng(4);
    for (std::size_t N : {2u, 5u, 9u}) {
        const auto g = random_element(N, rng);
        const Vec2 lam = random_vec(rng, 2.0);
        const ComplexMatrix prod = rep_matrix(lam, g, N) * rep_matrix(lam, inverse(g, N), N);
        const auto n = static_cast<Eigen::Index>(N);
        EXPECT_LT((prod - ComplexMatrix::Identity(n, n)).cwiseAbs().maxCoeff(), 1e-13);
    }
}

TEST(Homomorphism, RandomProperty) {
    std::mt19937_64 rng(5);
    for (std::size_t N = 1; N <= 12; ++N)
        for (int trial = 0; trial < 30; ++trial) {
            const Vec2 lam = random_vec(rng, 2.0);
            EXPECT_LT(check_homomorphism(lam, random_element(N, rng), random_element(N, rng), N), 1e-12);
        }
}

TEST(Unitarity, ExactCases) {
    EXPECT_EQ(check_unitary({0.2, 0.1}, {}, 4), 0.0);
    EXPECT_EQ(check_unitary({0.2, 0.1}, make_element(3, {}, 8), 8), 0.0);
}

TEST(Unitarity, RandomProperty) {
    std::mt19937_64 rng(6);
    for (int trial = 0; trial < 100; ++trial) {
        const Vec2 lam = random_vec(rng, 2.0);
        EXPECT_LT(check_unitary(lam, random_element(8, rng), 8), 1e-13);
    }
}

TEST(Commutant, SingleRotationIsScalar) {
    std::mt19937_64 rng(7);
    EXPECT_EQ(commutant_dimension({1.0, 0.0}, generic_sample(1, rng), 1), 1u);
}

TEST(Commutant, GenericSampleIsIrreducible) {
    std::mt19937_64 rng(8);
    EXPECT_EQ(commutant_dimension({1.0, 0.0}, generic_sample(6, rng), 6), 1u);
    for (std::size_t N = 2; N <= 12; ++N) {
        const Vec2 lam = random_vec(rng, 2.0);
        EXPECT_EQ(commutant_dimension(lam, generic_sample(N, rng), N), 1u) << "N=" << N;
    }
}

TEST(Commutant, TranslationsAloneLeaveDiagonalCommutant) {
    // Without the rotation the commutant is the N-dimensional diagonal algebra; the guard
    // refuses to report it.
    std::mt19937_64 rng(9);
    auto sample = generic_sample(5, rng);
    sample.erase(sample.begin());
    sample.pop_back();
    EXPECT_THROW(commutant_dimension({1.0, 0.0}, sample, 5), InsufficientSample);
}

TEST(Commutant, DegenerateSamplesRejected) {
    EXPECT_THROW(commutant_dimension({1.0, 0.0}, {GroupElement{}}, 4), InsufficientSample);
    // rotation by 2 does not generate Z_4
    EXPECT_THROW(commutant_dimension({1.0, 0.0}, {make_element(2, {}, 4), make_element(0, {1, 0}, 4),
                                                   make_element(0, {0, 1}, 4)},
                                     4),
                 InsufficientSample);
    // collinear translations
    EXPECT_THROW(commutant_dimension({1.0, 0.0}, {make_element(1, {}, 4), make_element(0, {1, 0}, 4),
                                                   make_element(0, {2, 0}, 4)},
                                     4),
                 InsufficientSample);
    // translations on the 2 pi lattice cannot separate phases
    const double p = 2.0 * std::numbers::pi;
    EXPECT_THROW(commutant_dimension({1.0, 0.0}, {make_element(1, {}, 2), make_element(0, {p, 0}, 2),
                                                   make_element(0, {0, p}, 2)},
                                     2),
                 InsufficientSample);
}

TEST(Commutant, NullityMatchesDirectCount) {
    // Independent assembly of vec(M T - T M) for two pure translations: the commutant is the
    // diagonal algebra, of dimension N.
    const std::size_t N = 4;
    const Vec2 lam{1.0, 0.0};
    const auto n = static_cast<Eigen::Index>(N);
    ComplexMatrix system = ComplexMatrix::Zero(2 * n * n, n * n);
    const GroupElement translations[] = {make_element(0, {0.9, 0.0}, N), make_element(0, {0.0, 1.3}, N)};
    for (Eigen::Index s = 0; s < 2; ++s) {
        const ComplexMatrix T = rep_matrix(lam, translations[s], N);
        for (Eigen::Index a = 0; a < n; ++a)
            for (Eigen::Index b = 0; b < n; ++b) {
                const Eigen::Index row = s * n * n + b * n + a;
                for (Eigen::Index c = 0; c < n; ++c) {
                    system(row, c * n + a) += T(c, b);  // (M T)(a, b) picks M(a, c)
                    system(row, b * n + c) -= T(a, c);  // (T M)(a, b) picks M(c, b)
                }
            }
    }
    Eigen::JacobiSVD<ComplexMatrix> svd(system);
    const auto& sv = svd.singularValues();
    std::size_t nullity = 0;
    for (Eigen::Index i = 0; i < sv.size(); ++i)
        if (sv(i) < 1e-9 * sv(0)) ++nullity;
    EXPECT_EQ(nullity, N);
}

TEST(MatrixCoefficient, ZeroRadiusDiagonal) {
    // t_{n,n}((0, 0)) = sum_l |chi_n(l)|^2 = N under unnormalized characters; J_0 at rho = 0 is N too.
    const std::size_t N = 5;
    for (std::size_t nhat = 0; nhat < N; ++nhat)
        EXPECT_LT(matrix_coefficient_check({1.3, 0.2}, nhat, nhat, 0, 0, {0.0, 0.0}, N), 1e-13);
    const auto T = rep_matrix(SlicePoint{1.3, 0.2}.cartesian(), {}, N);
    Eigen::VectorXcd chi(static_cast<Eigen::Index>(N));
    for (Eigen::Index l = 0; l < chi.size(); ++l) chi(l) = std::polar(1.0, rotation_angle(2 * l, N));
    EXPECT_NEAR(std::abs(chi.dot(T * chi) - Complex(5.0, 0.0)), 0.0, 1e-13);
}

TEST(MatrixCoefficient, DiagonalReducesToJ0) {
    std::mt19937_64 rng(11);
    const std::size_t N = 6;
    const SlicePoint lam = oracle::random_slice_point(N, 0.5, 2.0, rng);
    const SlicePoint y = oracle::random_slice_point(N, 0.5, 2.0, rng);
    for (std::size_t k = 0; k < N; ++k)
        for (std::size_t nhat = 0; nhat < N; ++nhat) {
            const GroupElement g{k, y.cartesian()};
            const auto T = rep_matrix(lam.cartesian(), g, N);
            Eigen::VectorXcd chi(static_cast<Eigen::Index>(N));
            for (Eigen::Index l = 0; l < chi.size(); ++l)
                chi(l) = std::polar(1.0, rotation_angle(static_cast<long long>(nhat) * l, N));
            const Complex t = chi.dot(T * chi);
            const Complex expected = std::polar(1.0, -rotation_angle(static_cast<long long>(nhat * k), N)) *
                                     generalized_bessel(0, lam, y, N);
            EXPECT_LT(std::abs(t - expected), 1e-12);
        }
}

TEST(MatrixCoefficient, RandomProperty) {
    std::mt19937_64 rng(12);
    for (std::size_t N : {2u, 4u, 8u})
        for (int trial = 0; trial < 5; ++trial) {
            const SlicePoint lam = oracle::random_slice_point(N, 0.1, 3.0, rng);
            const SlicePoint y = oracle::random_slice_point(N, 0.0, 3.0, rng);
            for (std::size_t m = 0; m < N; ++m)
                for (std::size_t n = 0; n < N; ++n)
                    for (std::size_t k = 0; k < N; ++k)
                        for (std::size_t h = 0; h < N; ++h)
                            EXPECT_LT(matrix_coefficient_check(lam, m, n, k, h, y, N), 1e-11);
        }
}
