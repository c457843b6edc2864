#pragma once

// Grayscale rasters (PGM or CSV), bilinear sampling on rotation-invariant grids, and the
// interpolation-vs-approximation stability experiment under rotations and translations.

#include <algorithm>
#include <cctype>
#include <cmath>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "se2n/solve.hpp"

namespace se2n {

struct RasterImage {
    std::size_t width = 0;
    std::size_t height = 0;
    std::vector<double> pixels;  ///< row-major, values in [0, 1]

    double at(std::size_t row, std::size_t col) const { return pixels[row * width + col]; }
};

namespace detail {
inline void skip_pgm_space(std::istream& in) {
    for (;;) {
        const int c = in.peek();
        if (c == '#') {
            std::string comment;
            std::getline(in, comment);
        } else if (c != EOF && std::isspace(c)) {
            in.get();
        } else {
            return;
        }
    }
}

inline std::size_t read_pgm_int(std::istream& in) {
    skip_pgm_space(in);
    long long v = -1;
    in >> v;
    if (!in || v < 0) throw ParseError("malformed PGM header");
    return static_cast<std::size_t>(v);
}
}  // namespace detail

/// Binary (P5) or ASCII (P2) PGM, scaled by maxval into [0, 1].
inline RasterImage load_pgm(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ParseError("cannot open " + path);
    std::string magic(2, '\0');
    in.read(magic.data(), 2);
    if (!in || (magic != "P5" && magic != "P2")) throw ParseError(path + " is not a P2/P5 PGM file");
    RasterImage img;
    img.width = detail::read_pgm_int(in);
    img.height = detail::read_pgm_int(in);
    const std::size_t maxval = detail::read_pgm_int(in);
    if (img.width == 0 || img.height == 0 || maxval == 0 || maxval > 65535) throw ParseError("unsupported PGM header");
    img.pixels.resize(img.width * img.height);
    if (magic == "P5") {
        in.get();  // single whitespace after maxval
        const std::size_t bytes = maxval < 256 ? 1 : 2;
        std::vector<unsigned char> raw(img.pixels.size() * bytes);
        in.read(reinterpret_cast<char*>(raw.data()), static_cast<std::streamsize>(raw.size()));
        if (!in) throw ParseError("truncated PGM pixel data");
        for (std::size_t i = 0; i < img.pixels.size(); ++i) {
            const double v = bytes == 1 ? raw[i] : (raw[2 * i] << 8 | raw[2 * i + 1]);
            img.pixels[i] = v / static_cast<double>(maxval);
        }
    } else {
        for (auto& p : img.pixels) p = static_cast<double>(detail::read_pgm_int(in)) / static_cast<double>(maxval);
    }
    return img;
}

/// Comma-separated rows of grayscale values; all rows must have the same length.
inline RasterImage load_csv_image(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ParseError("cannot open " + path);
    RasterImage img;
    std::string line;
    while (std::getline(in, line)) {
        if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
        std::stringstream ss(line);
        std::string cell;
        std::size_t count = 0;
        while (std::getline(ss, cell, ',')) {
            try {
                img.pixels.push_back(std::stod(cell));
            } catch (const std::exception&) {
                throw ParseError("non-numeric CSV cell '" + cell + "' in " + path);
            }
            ++count;
        }
        if (img.height == 0)
            img.width = count;
        else if (count != img.width)
            throw ParseError("ragged CSV image rows in " + path);
        ++img.height;
    }
    if (img.width == 0 || img.height == 0) throw ParseError(path + " holds no pixels");
    return img;
}

inline RasterImage load_image(const std::string& path) {
    const auto dot = path.rfind('.');
    const std::string ext = dot == std::string::npos ? "" : path.substr(dot + 1);
    if (ext == "csv" || ext == "CSV") return load_csv_image(path);
    return load_pgm(path);
}

inline void save_pgm(const RasterImage& img, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error("cannot write " + path);
    out << "P5\n" << img.width << ' ' << img.height << "\n255\n";
    for (double p : img.pixels) {
        const double c = std::round(std::clamp(p, 0.0, 1.0) * 255.0);
        out.put(static_cast<char>(static_cast<unsigned char>(c)));
    }
}

/// Pixel (r, c) sits at ((c - width/2), (height/2 - r)); pixels outside the raster read as 0.
inline double sample_bilinear(const RasterImage& img, Vec2 p) {
    const double c = p.x + static_cast<double>(img.width) / 2.0;
    const double r = static_cast<double>(img.height) / 2.0 - p.y;
    const double c0 = std::floor(c);
    const double r0 = std::floor(r);
    const double fc = c - c0;
    const double fr = r - r0;
    auto pixel = [&](double rr, double cc) {
        if (rr < 0.0 || cc < 0.0 || rr >= static_cast<double>(img.height) || cc >= static_cast<double>(img.width))
            return 0.0;
        return img.at(static_cast<std::size_t>(rr), static_cast<std::size_t>(cc));
    };
    return (1.0 - fr) * ((1.0 - fc) * pixel(r0, c0) + fc * pixel(r0, c0 + 1.0)) +
           fr * ((1.0 - fc) * pixel(r0 + 1.0, c0) + fc * pixel(r0 + 1.0, c0 + 1.0));
}

inline SampleArray sample_image(const RasterImage& img, GridPtr E) {
    ComplexMatrix s(static_cast<Eigen::Index>(E->N()), static_cast<Eigen::Index>(E->size()));
    for (std::size_t n = 0; n < E->N(); ++n)
        for (std::size_t j = 0; j < E->size(); ++j)
            s(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(j)) = sample_bilinear(img, E->point(n, j));
    return {std::move(s), std::move(E)};
}

/// E = F polar grid with log-spaced radii in [r_min, r_max]: `slice_points` / `rays_per_slice` radii.
inline RotInvariantGrid log_polar_grid(std::size_t N, std::size_t slice_points, std::size_t rays_per_slice,
                                       double r_min, double r_max, GridKind kind) {
    if (rays_per_slice == 0 || slice_points % rays_per_slice != 0)
        throw InvalidGrid("slice point count must be a multiple of the rays per slice");
    if (!(r_min > 0.0) || !(r_max > r_min)) throw InvalidGrid("need 0 < r_min < r_max");
    const std::size_t count = slice_points / rays_per_slice;
    std::vector<double> radii(count);
    for (std::size_t i = 0; i < count; ++i) {
        const double t = count == 1 ? 0.0 : static_cast<double>(i) / static_cast<double>(count - 1);
        radii[i] = r_min * std::pow(r_max / r_min, t);
    }
    return build_polar_grid(rays_per_slice, radii, N, kind);
}

struct DemoGridOptions {
    std::size_t N = 64;
    std::size_t slice_points = 340;
    std::size_t rays_per_slice = 2;
    double r_min = 0.65;
    double r_max = 128.0;
};

struct DemoRow {
    double coefficient_norm = 0.0;
    double evaluation_norm = 0.0;
    double rotation_norm = 0.0;
    double translation_norm = 0.0;
    /// ||ev(R f) - shift(ev f)||_F / ||ev f||_F
    double rotation_deviation = 0.0;
    SampleArray evaluated;
    SampleArray rotated;
    SampleArray translated;
    ApCoefficients coefficients;
};

struct DemoResult {
    double image_norm = 0.0;
    long long rotation_steps = 0;
    Vec2 shift;
    std::vector<double> interpolation_conditions;
    DemoRow interpolation;
    DemoRow approximation;
};

namespace detail {
inline DemoRow demo_row(const ApCoefficients& c, const FourierBesselBlocks& fb, long long steps, Vec2 shift,
                        unsigned threads) {
    SampleArray ev = evaluate_fast(c, fb, threads);
    SampleArray rot = evaluate_fast(rotate_coefficients(c, steps), fb, threads);
    SampleArray tr = evaluate_fast(translate_coefficients(c, shift), fb, threads);
    const double ev_norm = ev.values().norm();
    const double dev = (rot.values() - shift_rotation_axis(ev.values(), steps)).norm() /
                       (ev_norm > 0.0 ? ev_norm : 1.0);
    DemoRow row{c.values().norm(), ev_norm, rot.values().norm(), tr.values().norm(), dev,
                std::move(ev), std::move(rot), std::move(tr), c};
    return row;
}
}  // namespace detail

/// Interpolates and approximates the sampled image, then evaluates each fit, its rotation by
/// `rotation_steps` * 2 pi / N and its translation by `shift`, reporting L2 norms over E.
inline DemoResult run_image_demo(const RasterImage& img, GridPtr E, GridPtr F, const Weights& weights,
                                 long long rotation_steps, Vec2 shift, unsigned threads = 1) {
    auto blocks = std::make_shared<const FourierBesselBlocks>(assemble_blocks(E, F, threads));
    const SampleArray samples = sample_image(img, E);

    const BlockFactorization interp = prefactorize(blocks, SolveMode::interpolation, std::nullopt, threads);
    const BlockFactorization approx = prefactorize(blocks, SolveMode::approximation, weights, threads);
    const ApCoefficients fi = interpolate(samples, interp, threads);
    const ApCoefficients fa = approximate(samples, approx, threads);

    return DemoResult{samples.values().norm(),
                      rotation_steps,
                      shift,
                      interp.condition_estimates(),
                      detail::demo_row(fi, *blocks, rotation_steps, shift, threads),
                      detail::demo_row(fa, *blocks, rotation_steps, shift, threads)};
}

/// floor(N / 6) rotation steps, i.e. 10 steps for N = 64.
inline long long default_rotation_steps(std::size_t N) { return static_cast<long long>(N / 6); }

}  // namespace se2n
