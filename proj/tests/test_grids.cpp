#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <random>

#include "oracles.hpp"
#include "se2n/grid.hpp"

using namespace se2n;

namespace {

std::string temp_path(const std::string& name) {
    return (std::filesystem::temp_directory_path() / ("se2n_grid_" + name)).string();
}

std::vector<SlicePoint> sorted_points(const RotInvariantGrid& g) {
    auto p = g.points();
    std::sort(p.begin(), p.end(), [](const SlicePoint& a, const SlicePoint& b) {
        return a.radius != b.radius ? a.radius < b.radius : a.angle < b.angle;
    });
    return p;
}

void expect_same_points(const RotInvariantGrid& a, const RotInvariantGrid& b, double tol = 1e-12) {
    ASSERT_EQ(a.size(), b.size());
    const auto pa = sorted_points(a);
    const auto pb = sorted_points(b);
    for (std::size_t i = 0; i < pa.size(); ++i) {
        EXPECT_NEAR(pa[i].radius, pb[i].radius, tol);
        EXPECT_NEAR(pa[i].angle, pb[i].angle, tol);
    }
}

}  // namespace

TEST(PolarGrid, SingleOrbitSquare) {
    const auto g = build_polar_grid(1, {1.0}, 4);
    ASSERT_EQ(g.size(), 1u);
    EXPECT_EQ(g[0].radius, 1.0);
    EXPECT_EQ(g[0].angle, 0.0);
    const auto all = g.expand();
    ASSERT_EQ(all.size(), 4u);
    const Vec2 expected[] = {{1, 0}, {0, 1}, {-1, 0}, {0, -1}};
    for (std::size_t i = 0; i < 4; ++i) {
        EXPECT_NEAR(all[i].x, expected[i].x, 1e-15);
        EXPECT_NEAR(all[i].y, expected[i].y, 1e-15);
    }
}

TEST(PolarGrid, PointCountIsRaysTimesRadii) {
    for (std::size_t K : {1u, 2u, 3u, 5u})
        for (std::size_t R : {1u, 4u, 7u}) {
            std::vector<double> radii(R);
            for (std::size_t i = 0; i < R; ++i) radii[i] = 0.5 + static_cast<double>(i);
            EXPECT_EQ(build_polar_grid(K, radii, 6).size(), K * R);
        }
}

TEST(PolarGrid, TwoRaysFoldBackIntoSlice) {
    const auto g = build_polar_grid(2, {1.0, 2.0}, 8);
    ASSERT_EQ(g.size(), 4u);
    const double half = std::numbers::pi / 8.0;
    EXPECT_DOUBLE_EQ(g[1].angle, half);
    // every full-plane point folds back to one of the slice points
    for (const Vec2& p : g.expand()) {
        const auto s = slice_of(p, 8);
        const bool found = std::any_of(g.points().begin(), g.points().end(), [&](const SlicePoint& q) {
            return std::abs(q.radius - s.point.radius) < 1e-12 && std::abs(q.angle - s.point.angle) < 1e-12;
        });
        EXPECT_TRUE(found);
    }
    expect_same_points(canonicalize(g.expand(), 8, GridKind::spatial), g);
}

TEST(PolarGrid, RejectsBadRadii) {
    EXPECT_THROW(build_polar_grid(1, {0.0, 1.0}, 4), InvalidGrid);
    EXPECT_THROW(build_polar_grid(1, {-1.0}, 4), InvalidGrid);
    EXPECT_THROW(build_polar_grid(1, {1.0, 1.0}, 4), InvalidGrid);
    EXPECT_THROW(build_polar_grid(1, {2.0, 1.0}, 4), InvalidGrid);
    EXPECT_THROW(build_polar_grid(0, {1.0}, 4), InvalidGrid);
}

TEST(Canonicalize, OneOrbit) {
    const auto g = canonicalize({{1, 0}, {0, 1}, {-1, 0}, {0, -1}}, 4, GridKind::spatial);
    ASSERT_EQ(g.size(), 1u);
    EXPECT_NEAR(g[0].radius, 1.0, 1e-15);
    EXPECT_NEAR(g[0].angle, 0.0, 1e-15);
}

TEST(Canonicalize, IncompleteOrbitReportsWitness) {
    try {
        canonicalize({{1, 0}, {0, 1}}, 4, GridKind::spatial);
        FAIL() << "expected NotInvariant";
    } catch (const NotInvariant& e) {
        // the witness's rotated image is missing; (0,1) -> (-1,0)
        EXPECT_NEAR(e.witness_x, 0.0, 1e-15);
        EXPECT_NEAR(e.witness_y, 1.0, 1e-15);
    }
}

TEST(Canonicalize, ShuffledPolarGridRoundTrips) {
    const auto g = build_polar_grid(2, {1.0, 2.0}, 8);
    auto pts = g.expand();
    std::mt19937 rng(11);
    std::shuffle(pts.begin(), pts.end(), rng);
    const auto c = canonicalize(pts, 8, GridKind::spatial);
    EXPECT_EQ(c.size(), 4u);
    expect_same_points(c, g);
}

TEST(Canonicalize, OriginHandling) {
    std::vector<Vec2> pts = {{0, 0}, {1, 0}, {0, 1}, {-1, 0}, {0, -1}};
    const auto g = canonicalize(pts, 4, GridKind::spatial);
    EXPECT_EQ(g.size(), 2u);
    EXPECT_THROW(canonicalize(pts, 4, GridKind::frequency), TrivialStabilizer);
    pts.push_back({0, 0});
    EXPECT_THROW(canonicalize(pts, 4, GridKind::spatial), InvalidGrid);
}

TEST(Canonicalize, ToleratesSmallPerturbations) {
    auto pts = build_polar_grid(3, {0.5, 1.5, 2.5}, 5).expand();
    std::mt19937 rng(3);
    std::uniform_real_distribution<double> eps(-1e-11, 1e-11);
    for (auto& p : pts) p = {p.x + eps(rng), p.y + eps(rng)};
    EXPECT_EQ(canonicalize(pts, 5, GridKind::spatial).size(), 9u);
}

TEST(SliceOf, QuarterTurn) {
    const auto s = slice_of({0, 1}, 4);
    EXPECT_EQ(s.rotation_index, 1u);
    EXPECT_NEAR(s.point.radius, 1.0, 1e-15);
    EXPECT_NEAR(s.point.angle, 0.0, 1e-12);
}

TEST(SliceOf, EighthTurnBoundary) {
    const auto s = slice_of({1, 1}, 8);
    EXPECT_EQ(s.rotation_index, 1u);
    EXPECT_NEAR(s.point.radius, std::sqrt(2.0), 1e-15);
    EXPECT_NEAR(s.point.angle, 0.0, 1e-12);
}

TEST(SliceOf, InsideFirstSlice) {
    const auto s = slice_of({std::cos(0.3), std::sin(0.3)}, 10);
    EXPECT_EQ(s.rotation_index, 0u);
    EXPECT_NEAR(s.point.radius, 1.0, 1e-15);
    EXPECT_NEAR(s.point.angle, 0.3, 1e-15);
}

TEST(SliceOf, OriginConvention) {
    const auto s = slice_of({0, 0}, 7);
    EXPECT_EQ(s.rotation_index, 0u);
    EXPECT_EQ(s.point.radius, 0.0);
}

TEST(SliceOf, PropertyRecoversRotationIndex) {
    std::mt19937 rng(5);
    for (std::size_t N : {1u, 2u, 3u, 7u, 16u, 64u}) {
        const auto g = oracle::random_grid(N, 20, GridKind::spatial, rng);
        for (std::size_t n = 0; n < N; ++n)
            for (std::size_t j = 0; j < g.size(); ++j) {
                const auto s = slice_of(g.point(n, j), N);
                // an angle within round-off of the slice edge may legitimately fold to the neighbour
                const double width = kTwoPi / static_cast<double>(N);
                const double da = std::remainder(s.point.angle + static_cast<double>(s.rotation_index) * width -
                                                     g[j].angle - static_cast<double>(n) * width,
                                                 kTwoPi);
                EXPECT_LT(std::abs(da), 1e-10);
                if (g[j].angle > 1e-9 && g[j].angle < width - 1e-9) {
                    EXPECT_EQ(s.rotation_index, n);
                    EXPECT_LT(std::abs(s.point.angle - g[j].angle), 1e-10);
                }
                EXPECT_NEAR(s.point.radius, g[j].radius, 1e-12);
            }
    }
}

TEST(Canonicalize, PropertyInvertsExpansion) {
    std::mt19937 rng(8);
    for (int trial = 0; trial < 20; ++trial) {
        const std::size_t N = 1 + rng() % 12;
        const auto g = oracle::random_grid(N, 1 + rng() % 15, GridKind::frequency, rng);
        expect_same_points(canonicalize(g.expand(), N, GridKind::frequency), g, 1e-10);
    }
}

TEST(Grid, ValidatesInvariants) {
    const double w = kTwoPi / 4;
    EXPECT_THROW(RotInvariantGrid(0, {}, GridKind::spatial), InvalidGrid);
    EXPECT_THROW(RotInvariantGrid(4, {{1.0, w}}, GridKind::spatial), InvalidGrid);
    EXPECT_THROW(RotInvariantGrid(4, {{1.0, -0.1}}, GridKind::spatial), InvalidGrid);
    EXPECT_THROW(RotInvariantGrid(4, {{-1.0, 0.1}}, GridKind::spatial), InvalidGrid);
    EXPECT_THROW(RotInvariantGrid(4, {{1.0, 0.1}, {1.0, 0.1}}, GridKind::spatial), InvalidGrid);
    EXPECT_THROW(RotInvariantGrid(4, {{0.0, 0.0}}, GridKind::frequency), TrivialStabilizer);
    EXPECT_THROW(RotInvariantGrid(4, {{0.0, 0.0}, {0.0, 0.0}}, GridKind::spatial), InvalidGrid);
    EXPECT_NO_THROW(RotInvariantGrid(4, {{0.0, 0.0}, {1.0, 0.0}}, GridKind::spatial));
    EXPECT_THROW(RotInvariantGrid(4, {{std::nan(""), 0.0}}, GridKind::spatial), InvalidGrid);
}

TEST(GridJson, RoundTripIsExact) {
    std::mt19937 rng(21);
    const auto g = oracle::random_grid(9, 13, GridKind::frequency, rng);
    const auto path = temp_path("roundtrip.json");
    save_grid(g, path);
    EXPECT_EQ(load_grid(path), g);
}

TEST(GridJson, RejectsSliceBoundAngle) {
    const auto path = temp_path("edge.json");
    std::ofstream(path) << "{\"N\": 4, \"kind\": \"spatial\", \"points\": [{\"radius\": 1.0, \"angle\": "
                        << format_double(kTwoPi / 4) << "}]}";
    EXPECT_THROW(load_grid(path), InvalidGrid);
}

TEST(GridJson, RejectsZeroN) {
    const auto path = temp_path("zero.json");
    std::ofstream(path) << R"({"N": 0, "kind": "spatial", "points": []})";
    EXPECT_THROW(load_grid(path), InvalidGrid);
}

TEST(GridJson, MalformedInputIsParseError) {
    const auto path = temp_path("bad.json");
    std::ofstream(path) << R"({"N": 4, "kind": "spatial", "points": [)";
    EXPECT_THROW(load_grid(path), ParseError);
    std::ofstream(path) << R"({"N": 4, "kind": "polar", "points": []})";
    EXPECT_THROW(load_grid(path), ParseError);
    EXPECT_THROW(load_grid(temp_path("missing.json")), ParseError);
}
