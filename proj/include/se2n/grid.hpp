#pragma once

// Rotation-invariant point sets in the plane, stored through their
// fundamental slice {rho e^{i alpha} : alpha in [0, 2 pi / N)}.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdio>
#include <fstream>
#include <limits>
#include <memory>
#include <numbers>
#include <numeric>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include <nlohmann/json.hpp>

#include "se2n/errors.hpp"

namespace se2n {

inline constexpr double kTwoPi = 2.0 * std::numbers::pi;

/// Slack on the upper slice boundary: angles this close to 2*pi/N fold to the next rotation.
inline constexpr double kSliceAngleTolerance = 1e-12;
/// Euclidean matching tolerance used when checking invariance of raw point sets.
inline constexpr double kInvarianceTolerance = 1e-9;
/// Two grid points closer than this are duplicates.
inline constexpr double kDuplicateTolerance = 1e-12;

struct Vec2 {
    double x = 0.0;
    double y = 0.0;

    friend bool operator==(const Vec2&, const Vec2&) = default;
};

inline Vec2 operator+(Vec2 a, Vec2 b) { return {a.x + b.x, a.y + b.y}; }
inline Vec2 operator-(Vec2 a, Vec2 b) { return {a.x - b.x, a.y - b.y}; }
inline Vec2 operator-(Vec2 a) { return {-a.x, -a.y}; }
inline double dot(Vec2 a, Vec2 b) { return a.x * b.x + a.y * b.y; }
inline double norm(Vec2 a) { return std::hypot(a.x, a.y); }

/// Angle of the k-th discrete rotation, 2*pi*k/N, with k reduced mod N.
inline double rotation_angle(long long k, std::size_t N) {
    const auto n = static_cast<long long>(N);
    const long long r = ((k % n) + n) % n;
    return kTwoPi * static_cast<double>(r) / static_cast<double>(N);
}

inline Vec2 rotate(Vec2 v, double angle) {
    const double c = std::cos(angle);
    const double s = std::sin(angle);
    return {c * v.x - s * v.y, s * v.x + c * v.y};
}

/// R_{2 pi k / N} v
inline Vec2 rotate(Vec2 v, long long k, std::size_t N) { return rotate(v, rotation_angle(k, N)); }

struct SlicePoint {
    double radius = 0.0;
    double angle = 0.0;

    Vec2 cartesian() const { return {radius * std::cos(angle), radius * std::sin(angle)}; }

    friend bool operator==(const SlicePoint&, const SlicePoint&) = default;
};

enum class GridKind { spatial, frequency };

inline const char* to_string(GridKind kind) {
    return kind == GridKind::spatial ? "spatial" : "frequency";
}

struct SliceCoordinates {
    std::size_t rotation_index = 0;
    SlicePoint point;
};

/// Folds a planar point into the fundamental slice. The origin maps to (0, {0, 0}).
inline SliceCoordinates slice_of(Vec2 p, std::size_t N) {
    if (N == 0) throw InvalidGrid("number of rotations must be positive");
    const double r = norm(p);
    if (r == 0.0) return {0, {0.0, 0.0}};
    double theta = std::atan2(p.y, p.x);
    if (theta < 0.0) theta += kTwoPi;
    const double width = kTwoPi / static_cast<double>(N);
    auto n = static_cast<std::size_t>(std::floor(theta / width));
    double alpha = theta - static_cast<double>(n) * width;
    if (alpha < 0.0) {
        // floor() can overshoot by one ulp
        if (n > 0) {
            --n;
            alpha += width;
        } else {
            alpha = 0.0;
        }
    }
    if (alpha >= width - kSliceAngleTolerance) {
        alpha = 0.0;
        ++n;
    }
    return {n % N, {r, alpha}};
}

/// A finite point set invariant under the N discrete rotations, represented by its slice points.
/// Full-plane point (n, j) is R_{2 pi n / N} points[j]; linear index n * size() + j.
class RotInvariantGrid {
public:
    RotInvariantGrid(std::size_t N, std::vector<SlicePoint> points, GridKind kind)
        : N_(N), points_(std::move(points)), kind_(kind) {
        validate();
    }

    std::size_t N() const { return N_; }
    std::size_t size() const { return points_.size(); }
    GridKind kind() const { return kind_; }
    const std::vector<SlicePoint>& points() const { return points_; }
    const SlicePoint& operator[](std::size_t j) const { return points_[j]; }

    double slice_width() const { return kTwoPi / static_cast<double>(N_); }

    /// Cartesian coordinates of R_{2 pi n / N} sigma(y_j).
    Vec2 point(std::size_t n, std::size_t j) const {
        const SlicePoint& s = points_[j];
        return {s.radius * std::cos(s.angle + rotation_angle(static_cast<long long>(n), N_)),
                s.radius * std::sin(s.angle + rotation_angle(static_cast<long long>(n), N_))};
    }

    /// All N * size() points, rotation index outer.
    std::vector<Vec2> expand() const {
        std::vector<Vec2> out;
        out.reserve(N_ * points_.size());
        for (std::size_t n = 0; n < N_; ++n)
            for (std::size_t j = 0; j < points_.size(); ++j) out.push_back(point(n, j));
        return out;
    }

    RotInvariantGrid with_kind(GridKind kind) const { return {N_, points_, kind}; }

    /// Smallest distance between two distinct points of the full-plane set (infinity if fewer than two).
    double min_pairwise_distance() const {
        const auto all = expand();
        double best = std::numeric_limits<double>::infinity();
        for (std::size_t a = 0; a < all.size(); ++a)
            for (std::size_t b = a + 1; b < all.size(); ++b) best = std::min(best, norm(all[a] - all[b]));
        return best;
    }

    friend bool operator==(const RotInvariantGrid& a, const RotInvariantGrid& b) {
        return a.N_ == b.N_ && a.kind_ == b.kind_ && a.points_ == b.points_;
    }

private:
    void validate() const {
        if (N_ == 0) throw InvalidGrid("number of rotations N must be positive");
        const double width = slice_width();
        for (std::size_t j = 0; j < points_.size(); ++j) {
            const SlicePoint& s = points_[j];
            if (!std::isfinite(s.radius) || !std::isfinite(s.angle))
                throw InvalidGrid("grid point " + std::to_string(j) + " is not finite");
            if (s.radius < 0.0) throw InvalidGrid("grid point " + std::to_string(j) + " has negative radius");
            if (s.angle < 0.0 || s.angle >= width - kSliceAngleTolerance)
                throw InvalidGrid("grid point " + std::to_string(j) + " has angle outside [0, 2pi/N)");
            if (kind_ == GridKind::frequency && s.radius == 0.0)
                throw TrivialStabilizer("frequency grid contains the zero frequency");
        }
        // Sweep in radius order; duplicates must have nearly equal radii.
        std::vector<std::size_t> order(points_.size());
        std::iota(order.begin(), order.end(), std::size_t{0});
        std::sort(order.begin(), order.end(),
                  [&](std::size_t a, std::size_t b) { return points_[a].radius < points_[b].radius; });
        for (std::size_t a = 0; a < order.size(); ++a) {
            const Vec2 pa = points_[order[a]].cartesian();
            for (std::size_t b = a + 1; b < order.size(); ++b) {
                if (points_[order[b]].radius - points_[order[a]].radius > kDuplicateTolerance) break;
                if (norm(pa - points_[order[b]].cartesian()) <= kDuplicateTolerance)
                    throw InvalidGrid("grid points " + std::to_string(order[a]) + " and " +
                                      std::to_string(order[b]) + " coincide");
            }
        }
    }

    std::size_t N_;
    std::vector<SlicePoint> points_;
    GridKind kind_;
};

using GridPtr = std::shared_ptr<const RotInvariantGrid>;

inline GridPtr share(RotInvariantGrid grid) { return std::make_shared<const RotInvariantGrid>(std::move(grid)); }

/// Polar grid with `rays_per_slice` equally spaced rays inside each slice, crossed with `radii`.
/// Points are ordered radius-major.
inline RotInvariantGrid build_polar_grid(std::size_t rays_per_slice, const std::vector<double>& radii, std::size_t N,
                                         GridKind kind = GridKind::spatial) {
    if (N == 0) throw InvalidGrid("number of rotations N must be positive");
    if (rays_per_slice == 0) throw InvalidGrid("need at least one ray per slice");
    for (std::size_t i = 0; i < radii.size(); ++i) {
        if (!(radii[i] > 0.0)) throw InvalidGrid("polar radii must be positive");
        if (i > 0 && !(radii[i] > radii[i - 1])) throw InvalidGrid("polar radii must be strictly increasing");
    }
    const double step = kTwoPi / static_cast<double>(N) / static_cast<double>(rays_per_slice);
    std::vector<SlicePoint> pts;
    pts.reserve(radii.size() * rays_per_slice);
    for (double r : radii)
        for (std::size_t t = 0; t < rays_per_slice; ++t) pts.push_back({r, static_cast<double>(t) * step});
    return {N, std::move(pts), kind};
}

/// Recovers the slice representation of a rotation-invariant point set.
/// The origin may appear once or N times in a spatial set and yields a single slice point.
inline RotInvariantGrid canonicalize(const std::vector<Vec2>& points, std::size_t N, GridKind kind) {
    if (N == 0) throw InvalidGrid("number of rotations N must be positive");

    std::vector<std::size_t> nonzero;
    std::size_t origin_count = 0;
    for (std::size_t i = 0; i < points.size(); ++i) {
        if (!std::isfinite(points[i].x) || !std::isfinite(points[i].y))
            throw InvalidGrid("point " + std::to_string(i) + " is not finite");
        if (norm(points[i]) <= kInvarianceTolerance)
            ++origin_count;
        else
            nonzero.push_back(i);
    }
    if (origin_count > 0 && kind == GridKind::frequency)
        throw TrivialStabilizer("frequency set contains the zero frequency");
    if (origin_count > 1 && origin_count != N)
        throw InvalidGrid("origin must appear once or N times, found " + std::to_string(origin_count));

    // radius-sorted index for neighbour lookup
    std::vector<std::size_t> by_radius = nonzero;
    std::vector<double> radius(points.size());
    for (std::size_t i : nonzero) radius[i] = norm(points[i]);
    std::sort(by_radius.begin(), by_radius.end(), [&](std::size_t a, std::size_t b) { return radius[a] < radius[b]; });

    auto find_match = [&](Vec2 q) -> std::ptrdiff_t {
        const double rq = norm(q);
        auto lo = std::lower_bound(by_radius.begin(), by_radius.end(), rq - kInvarianceTolerance,
                                   [&](std::size_t idx, double v) { return radius[idx] < v; });
        for (auto it = lo; it != by_radius.end() && radius[*it] <= rq + kInvarianceTolerance; ++it)
            if (norm(points[*it] - q) <= kInvarianceTolerance) return static_cast<std::ptrdiff_t>(*it);
        return -1;
    };

    // successor under one rotation step; must be a permutation whose cycles all have length N
    std::vector<std::ptrdiff_t> next(points.size(), -1);
    std::vector<int> hit(points.size(), 0);
    for (std::size_t i : nonzero) {
        const std::ptrdiff_t j = find_match(rotate(points[i], 1, N));
        if (j < 0) {
            char buf[160];
            std::snprintf(buf, sizeof buf, "point set is not invariant under rotation by 2pi/%zu: image of (%.17g, %.17g) is missing",
                          N, points[i].x, points[i].y);
            throw NotInvariant(buf, points[i].x, points[i].y);
        }
        if (hit[static_cast<std::size_t>(j)]++ > 0)
            throw InvalidGrid("duplicate points near (" + std::to_string(points[static_cast<std::size_t>(j)].x) + ", " +
                              std::to_string(points[static_cast<std::size_t>(j)].y) + ")");
        next[i] = j;
    }

    std::vector<SlicePoint> slice;
    if (origin_count > 0) slice.push_back({0.0, 0.0});
    std::vector<char> seen(points.size(), 0);
    for (std::size_t i : nonzero) {
        if (seen[i]) continue;
        std::size_t length = 0;
        std::ptrdiff_t rep = -1;
        double rep_angle = std::numeric_limits<double>::infinity();
        auto cur = static_cast<std::ptrdiff_t>(i);
        while (!seen[static_cast<std::size_t>(cur)]) {
            seen[static_cast<std::size_t>(cur)] = 1;
            ++length;
            const auto sc = slice_of(points[static_cast<std::size_t>(cur)], N);
            // Prefer the member lying in the fundamental slice itself.
            const double key = sc.rotation_index == 0 ? -1.0 : sc.point.angle;
            if (rep < 0 || key < rep_angle) {
                rep = cur;
                rep_angle = key;
            }
            cur = next[static_cast<std::size_t>(cur)];
        }
        if (length != N)
            throw InvalidGrid("rotation orbit of a point has " + std::to_string(length) + " members instead of " +
                              std::to_string(N));
        slice.push_back(slice_of(points[static_cast<std::size_t>(rep)], N).point);
    }
    return {N, std::move(slice), kind};
}

// -- persistence -------------------------------------------------------------

inline std::string format_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

inline std::string grid_to_json(const RotInvariantGrid& grid) {
    std::ostringstream os;
    os << "{\"N\": " << grid.N() << ", \"kind\": \"" << to_string(grid.kind()) << "\", \"points\": [";
    for (std::size_t j = 0; j < grid.size(); ++j) {
        if (j) os << ", ";
        os << "{\"radius\": " << format_double(grid[j].radius) << ", \"angle\": " << format_double(grid[j].angle)
           << "}";
    }
    os << "]}";
    return os.str();
}

inline RotInvariantGrid grid_from_json(const nlohmann::json& j) {
    if (!j.is_object()) throw ParseError("grid JSON must be an object");
    if (!j.contains("N") || !j.contains("kind") || !j.contains("points"))
        throw ParseError("grid JSON requires keys N, kind, points");
    const auto& jn = j.at("N");
    if (!jn.is_number_integer()) throw ParseError("grid N must be an integer");
    if (jn.get<long long>() <= 0) throw InvalidGrid("number of rotations N must be positive");
    const auto N = jn.get<std::size_t>();

    const auto& jk = j.at("kind");
    if (!jk.is_string()) throw ParseError("grid kind must be a string");
    GridKind kind;
    if (jk == "spatial")
        kind = GridKind::spatial;
    else if (jk == "frequency")
        kind = GridKind::frequency;
    else
        throw ParseError("grid kind must be \"spatial\" or \"frequency\"");

    const auto& jp = j.at("points");
    if (!jp.is_array()) throw ParseError("grid points must be an array");
    std::vector<SlicePoint> pts;
    pts.reserve(jp.size());
    for (const auto& p : jp) {
        if (!p.is_object() || !p.contains("radius") || !p.contains("angle") || !p.at("radius").is_number() ||
            !p.at("angle").is_number())
            throw ParseError("grid point must be {\"radius\": number, \"angle\": number}");
        pts.push_back({p.at("radius").get<double>(), p.at("angle").get<double>()});
    }
    return {N, std::move(pts), kind};
}

inline nlohmann::json parse_json_text(const std::string& text) {
    try {
        return nlohmann::json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
        throw ParseError(std::string("malformed JSON: ") + e.what());
    }
}

inline std::string read_text_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ParseError("cannot open " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

inline void save_grid(const RotInvariantGrid& grid, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error("cannot write " + path);
    out << grid_to_json(grid) << '\n';
    if (!out) throw Error("failed writing " + path);
}

inline RotInvariantGrid load_grid(const std::string& path) { return grid_from_json(parse_json_text(read_text_file(path))); }

}  // namespace se2n
