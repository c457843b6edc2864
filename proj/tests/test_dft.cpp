#include <gtest/gtest.h>

#include <random>

#include "oracles.hpp"
#include "se2n/dft.hpp"
#include "se2n/harness.hpp"

using namespace se2n;

TEST(RotationAxisDft, ConstantColumnGoesToDc) {
    for (Eigen::Index N : {1, 2, 5, 8, 64}) {
        const ComplexMatrix ones = ComplexMatrix::Ones(N, 1);
        const ComplexMatrix out = dft_rotation_axis(ones, DftDirection::forward);
        EXPECT_NEAR(std::abs(out(0, 0) - Complex(std::sqrt(static_cast<double>(N)), 0.0)), 0.0, 1e-13);
        for (Eigen::Index n = 1; n < N; ++n) EXPECT_LT(std::abs(out(n, 0)), 1e-13);
    }
}

TEST(RotationAxisDft, QuarterTurnColumn) {
    ComplexMatrix v(4, 1);
    v << Complex(1, 0), Complex(0, 1), Complex(-1, 0), Complex(0, -1);
    const ComplexMatrix out = dft_rotation_axis(v, DftDirection::forward);
    const Complex expected[] = {0.0, 2.0, 0.0, 0.0};
    for (Eigen::Index n = 0; n < 4; ++n) EXPECT_LT(std::abs(out(n, 0) - expected[n]), 1e-15);
}

TEST(RotationAxisDft, MatchesDirectSummation) {
    std::mt19937_64 rng(1);
    for (Eigen::Index N : {1, 2, 3, 6, 7, 16, 31}) {
        const ComplexMatrix in = random_complex(N, 5, rng);
        EXPECT_LT(oracle::relative(dft_rotation_axis(in, DftDirection::forward), oracle::dft(in)), 1e-14);
        // inverse is the adjoint: conj(F conj(x))
        const ComplexMatrix inv_ref = oracle::dft(in.conjugate()).conjugate();
        EXPECT_LT(oracle::relative(dft_rotation_axis(in, DftDirection::inverse), inv_ref), 1e-14);
    }
}

TEST(RotationAxisDft, UnitaryRoundTrip) {
    std::mt19937_64 rng(2);
    for (Eigen::Index N : {1, 4, 9, 64, 97}) {
        const ComplexMatrix in = random_complex(N, 11, rng);
        const ComplexMatrix f = dft_rotation_axis(in, DftDirection::forward);
        EXPECT_NEAR(f.norm(), in.norm(), 1e-13 * in.norm());
        EXPECT_LT(oracle::relative(dft_rotation_axis(f, DftDirection::inverse), in), 1e-13);
    }
}

TEST(RotationAxisDft, ThreadSafeAndDeterministic) {
    std::mt19937_64 rng(3);
    const ComplexMatrix in = random_complex(24, 40, rng);
    const ComplexMatrix ref = dft_rotation_axis(in, DftDirection::forward);
    std::vector<ComplexMatrix> out(8);
    parallel_for(out.size(), 4, [&](std::size_t i) { out[i] = dft_rotation_axis(in, DftDirection::forward); });
    for (const auto& o : out) EXPECT_EQ(o, ref);
}
