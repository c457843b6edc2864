// se2n: grids, transforms, solvers, representation checks, benchmarks and the image demo
// from the command line.
//
// Exit codes: 0 ok, 1 a verification failed, 2 usage, 3 grid error, 4 ill-posed solve, 5 I/O.

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "se2n/se2n.hpp"

namespace fs = std::filesystem;
using namespace se2n;

namespace {

enum Exit { kOk = 0, kFailed = 1, kUsage = 2, kGrid = 3, kIllPosed = 4, kIo = 5 };

struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

GridKind parse_kind(const std::string& s) {
    if (s == "spatial") return GridKind::spatial;
    if (s == "frequency") return GridKind::frequency;
    throw UsageError("--kind must be spatial or frequency");
}

/// {"N": n, "points": [[x, y], ...]} or a bare array of [x, y] pairs.
std::vector<Vec2> load_planar_points(const std::string& path, std::size_t& N) {
    const auto j = parse_json_text(read_text_file(path));
    const nlohmann::json* arr = &j;
    if (j.is_object()) {
        if (j.contains("N")) {
            if (!j["N"].is_number_integer() || j["N"].get<long long>() <= 0)
                throw InvalidGrid("number of rotations N must be positive");
            if (N == 0) N = j["N"].get<std::size_t>();
        }
        if (!j.contains("points")) throw ParseError("point file needs a \"points\" array");
        arr = &j["points"];
    }
    if (!arr->is_array()) throw ParseError("points must be an array of [x, y] pairs");
    std::vector<Vec2> pts;
    for (const auto& p : *arr) {
        if (!p.is_array() || p.size() != 2 || !p[0].is_number() || !p[1].is_number())
            throw ParseError("each point must be a [x, y] pair");
        pts.push_back({p[0].get<double>(), p[1].get<double>()});
    }
    return pts;
}

/// Comma- or whitespace-separated text matrix with N rows and Q columns.
Weights load_weights_file(const std::string& path, std::size_t N, std::size_t Q) {
    std::ifstream in(path);
    if (!in) throw ParseError("cannot open " + path);
    std::vector<double> vals;
    std::string line;
    std::size_t rows = 0;
    while (std::getline(in, line)) {
        for (char& ch : line)
            if (ch == ',') ch = ' ';
        std::istringstream ss(line);
        std::size_t cols = 0;
        double v = 0.0;
        while (ss >> v) {
            vals.push_back(v);
            ++cols;
        }
        if (!ss.eof()) throw ParseError("non-numeric entry in weights file " + path);
        if (cols == 0) continue;
        if (cols != Q) throw GridMismatch("weights file row has " + std::to_string(cols) + " entries, expected " + std::to_string(Q));
        ++rows;
    }
    if (rows == 1) return Weights::radial(Eigen::Map<Eigen::VectorXd>(vals.data(), static_cast<Eigen::Index>(Q)), N);
    if (rows != N) throw GridMismatch("weights file must have 1 or N rows");
    Eigen::MatrixXd d(static_cast<Eigen::Index>(N), static_cast<Eigen::Index>(Q));
    for (std::size_t i = 0; i < N; ++i)
        for (std::size_t k = 0; k < Q; ++k) d(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(k)) = vals[i * Q + k];
    return Weights(d);
}

std::vector<double> parse_list(const std::string& s) {
    std::vector<double> out;
    std::stringstream ss(s);
    std::string item;
    while (std::getline(ss, item, ',')) {
        try {
            std::size_t used = 0;
            out.push_back(std::stod(item, &used));
            if (used != item.size()) throw std::invalid_argument(item);
        } catch (const std::exception&) {
            throw UsageError("not a number: '" + item + "'");
        }
    }
    return out;
}

std::string fmt(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.6g", v);
    return buf;
}

void write_text(const std::string& path, const std::string& text) {
    std::ofstream out(path);
    if (!out) throw Error("cannot write " + path);
    out << text;
    if (!out) throw Error("failed writing " + path);
}

// -- subcommands -------------------------------------------------------------

struct GridArgs {
    bool polar = false;
    std::size_t rays = 1;
    std::string radii;
    std::size_t N = 0;
    std::string from_points;
    std::string kind = "spatial";
    std::string out;
};

int run_grid(const GridArgs& a) {
    if (a.polar == !a.from_points.empty()) throw UsageError("grid needs exactly one of --polar or --from-points");
    const GridKind kind = parse_kind(a.kind);
    RotInvariantGrid g = [&] {
        if (a.polar) {
            if (a.N == 0 || a.radii.empty()) throw UsageError("--polar needs --N and --radii");
            return build_polar_grid(a.rays, parse_list(a.radii), a.N, kind);
        }
        std::size_t N = a.N;
        auto pts = load_planar_points(a.from_points, N);
        if (N == 0) throw UsageError("--from-points needs --N or an \"N\" entry in the file");
        return canonicalize(pts, N, kind);
    }();
    if (a.out.empty())
        std::cout << grid_to_json(g) << '\n';
    else
        save_grid(g, a.out);
    std::cerr << "grid: N=" << g.N() << ", " << g.size() << " slice points, " << to_string(g.kind()) << '\n';
    return kOk;
}

struct EvalArgs {
    std::string coeffs;
    std::string grid;
    std::string out;
    bool naive = false;
    bool check_oracle = false;
};

GridPtr load_spatial(const std::string& path) {
    auto g = load_grid(path);
    return share(g.kind() == GridKind::spatial ? std::move(g) : g.with_kind(GridKind::spatial));
}

GridPtr load_frequency(const std::string& path) {
    auto g = load_grid(path);
    return share(g.kind() == GridKind::frequency ? std::move(g) : g.with_kind(GridKind::frequency));
}

int run_evaluate(const EvalArgs& a, unsigned threads) {
    const auto c = load_coefficients(a.coeffs);
    const auto E = load_spatial(a.grid);
    std::optional<SampleArray> s;
    if (a.naive) {
        s.emplace(evaluate_naive(c, E, threads));
    } else {
        const auto fb = assemble_blocks(E, c.grid(), threads);
        s.emplace(evaluate_fast(c, fb, threads));
        if (a.check_oracle) {
            const auto ref = evaluate_naive(c, E, threads);
            const double scale = ref.values().cwiseAbs().maxCoeff();
            const double dev = (s->values() - ref.values()).cwiseAbs().maxCoeff() / (scale > 0.0 ? scale : 1.0);
            std::cout << "oracle_max_rel_deviation\t" << fmt(dev) << '\n';
        }
    }
    save_samples(a.out, *s, fs::absolute(a.grid).string());
    return kOk;
}

struct SolveArgs {
    std::string samples;
    std::string freq;
    std::string out;
    std::string weights;
    std::string scheme;
    double alpha = 100.0;
};

void report_conditions(const BlockFactorization& f) {
    const auto& c = f.condition_estimates();
    const auto [lo, hi] = std::minmax_element(c.begin(), c.end());
    std::cerr << to_string(f.mode()) << ": " << c.size() << " blocks, condition estimates in [" << fmt(*lo) << ", "
              << fmt(*hi) << "]\n";
}

int run_solve(const SolveArgs& a, SolveMode mode, unsigned threads) {
    const auto s = load_samples(a.samples);
    const GridPtr F = a.freq.empty() ? share(s.grid()->with_kind(GridKind::frequency)) : load_frequency(a.freq);
    auto blocks = std::make_shared<const FourierBesselBlocks>(assemble_blocks(s.grid(), F, threads));
    std::optional<Weights> d;
    if (mode == SolveMode::approximation) {
        if (!a.scheme.empty()) {
            if (a.scheme != "radial") throw UsageError("--weights-scheme accepts only 'radial'");
            if (!a.weights.empty()) throw UsageError("use either --weights or --weights-scheme");
            d = radial_weights(*F, a.alpha);
        } else if (a.weights.empty() || a.weights == "zero") {
            d = zero_weights(*F);
        } else {
            d = load_weights_file(a.weights, F->N(), F->size());
        }
    }
    const auto f = prefactorize(blocks, mode, d, threads);
    report_conditions(f);
    const auto c = mode == SolveMode::interpolation ? interpolate(s, f, threads) : approximate(s, f, threads);
    save_coefficients(a.out, c, a.freq.empty() ? std::string{} : fs::absolute(a.freq).string());
    return kOk;
}

struct DemoArgs {
    std::string image;
    std::string grid;
    DemoGridOptions opts;
    double alpha = 100.0;
    std::string xi = "15,26";
    long long steps = -1;
    std::string out;
    std::string arrays_dir;
};

int run_demo(const DemoArgs& a, unsigned threads) {
    RasterImage img;
    try {
        img = load_image(a.image);
    } catch (const ParseError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kIo;
    }
    const auto xi = parse_list(a.xi);
    if (xi.size() != 2) throw UsageError("--xi takes two comma-separated numbers");
    const GridPtr E = a.grid.empty() ? share(log_polar_grid(a.opts.N, a.opts.slice_points, a.opts.rays_per_slice,
                                                            a.opts.r_min, a.opts.r_max, GridKind::spatial))
                                     : load_spatial(a.grid);
    const GridPtr F = share(E->with_kind(GridKind::frequency));
    const long long steps = a.steps >= 0 ? a.steps : default_rotation_steps(E->N());
    const auto r = run_image_demo(img, E, F, radial_weights(*F, a.alpha), steps, {xi[0], xi[1]}, threads);

    const auto [clo, chi] = std::minmax_element(r.interpolation_conditions.begin(), r.interpolation_conditions.end());
    std::cerr << "grid N=" << E->N() << " Q=" << E->size() << ", interpolation condition estimates in [" << fmt(*clo)
              << ", " << fmt(*chi) << "], rotation " << steps << " steps, shift (" << xi[0] << ", " << xi[1] << ")\n";
    std::cout << "image_norm\t" << fmt(r.image_norm) << '\n';
    std::cout << "row\tcoeff_norm\teval_norm\trotated_norm\ttranslated_norm\n";
    std::ostringstream csv;
    csv << "row,coeff_norm,eval_norm,rotated_norm,translated_norm,rotation_rel_dev\n";
    for (const auto* row : {&r.interpolation, &r.approximation}) {
        const char* name = row == &r.interpolation ? "interpolation" : "approximation";
        std::cout << name << '\t' << fmt(row->coefficient_norm) << '\t' << fmt(row->evaluation_norm) << '\t'
                  << fmt(row->rotation_norm) << '\t' << fmt(row->translation_norm) << '\n';
        csv << name << ',' << format_double(row->coefficient_norm) << ',' << format_double(row->evaluation_norm) << ','
            << format_double(row->rotation_norm) << ',' << format_double(row->translation_norm) << ','
            << format_double(row->rotation_deviation) << '\n';
    }
    if (!a.out.empty()) write_text(a.out, csv.str());
    if (!a.arrays_dir.empty()) {
        fs::create_directories(a.arrays_dir);
        const fs::path dir(a.arrays_dir);
        save_grid(*E, (dir / "grid.json").string());
        save_samples((dir / "samples.bin").string(), sample_image(img, E), "grid.json");
        for (const auto& [name, row] : {std::pair{"interpolation", &r.interpolation}, std::pair{"approximation", &r.approximation}}) {
            save_samples((dir / (std::string(name) + "_eval.bin")).string(), row->evaluated, "grid.json");
            save_samples((dir / (std::string(name) + "_rotated.bin")).string(), row->rotated, "grid.json");
            save_samples((dir / (std::string(name) + "_translated.bin")).string(), row->translated, "grid.json");
        }
    }
    return kOk;
}

struct BenchArgs {
    std::vector<std::size_t> N;
    std::vector<std::size_t> Q;
    std::size_t reps = 5;
    std::size_t optimal = 0;
    std::string out;
    std::uint64_t seed = 7;
};

int run_bench(const BenchArgs& a, unsigned threads) {
    if (a.optimal > 0) {
        std::cout << optimal_N(a.optimal) << '\n';
        if (a.N.empty()) return kOk;
    }
    if (a.N.empty() || a.Q.empty()) throw UsageError("bench needs --N and --Q (or --optimal-N)");
    const auto report = bench_evaluate(a.N, a.Q, a.reps, threads, a.seed);
    std::cout << "N\tP\tQ\tthreads\tnaive_s\tfast_s\tfast_par_s\tspeedup\tprefact_s\tsolve_s\tbin_solve_s\toracle_dev\n";
    for (const auto& r : report.records)
        std::cout << r.N << '\t' << r.P << '\t' << r.Q << '\t' << r.threads << '\t' << fmt(r.naive_s) << '\t'
                  << fmt(r.fast_s) << '\t' << fmt(r.fast_parallel_s) << '\t' << fmt(r.naive_s / r.fast_s) << '\t'
                  << fmt(r.prefactorize_s) << '\t' << fmt(r.solve_s) << '\t' << fmt(r.solve_per_bin_s) << '\t'
                  << fmt(r.oracle_deviation) << '\n';
    if (!a.out.empty()) write_text(a.out, report.to_csv());
    return kOk;
}

int run_verify_rep(std::size_t N, std::size_t seeds, std::uint64_t seed) {
    if (N == 0) throw UsageError("--N must be positive");
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> u(-2.0, 2.0);
    std::uniform_real_distribution<double> t(0.7, 1.9);
    auto vec = [&] { return Vec2{u(rng), u(rng)}; };
    auto elem = [&] { return make_element(static_cast<long long>(rng() % N), vec(), N); };
    auto nonzero = [&] {
        Vec2 v = vec();
        while (norm(v) < 1e-3) v = vec();
        return v;
    };

    double hom = 0.0;
    double uni = 0.0;
    double coef = 0.0;
    std::size_t bad_commutants = 0;
    for (std::size_t s = 0; s < seeds; ++s) {
        const Vec2 lam = nonzero();
        const auto g1 = elem();
        const auto g2 = elem();
        hom = std::max(hom, check_homomorphism(lam, g1, g2, N));
        uni = std::max(uni, std::max(check_unitary(lam, g1, N), check_unitary(lam, g2, N)));
        const std::vector<GroupElement> sample = {make_element(1, {}, N), make_element(0, {t(rng), 0.0}, N),
                                                  make_element(0, {0.0, t(rng)}, N), g1, g2};
        if (commutant_dimension(lam, sample, N) != 1) ++bad_commutants;
        const auto lam_s = slice_of(lam, N).point;
        const auto y = slice_of(vec(), N).point;
        const std::size_t m = rng() % N;
        const std::size_t n = rng() % N;
        coef = std::max(coef, matrix_coefficient_check(lam_s, m, n, rng() % N, rng() % N, y, N));
    }
    std::cout << "N\t" << N << "\nsamples\t" << seeds << '\n'
              << "homomorphism_max_err\t" << fmt(hom) << '\n'
              << "unitarity_max_err\t" << fmt(uni) << '\n'
              << "matrix_coefficient_max_err\t" << fmt(coef) << '\n'
              << "nontrivial_commutants\t" << bad_commutants << '\n';
    const bool ok = hom < 1e-12 && uni < 1e-12 && coef < 1e-11 && bad_commutants == 0;
    std::cout << (ok ? "ok" : "FAILED") << '\n';
    return ok ? kOk : kFailed;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Almost-periodic functions with rotation-invariant frequency sets on SE(2,N)"};
    app.require_subcommand(1);
    app.fallthrough();
    unsigned threads = default_thread_count();
    app.add_option("--threads", threads, "worker threads for per-bin work")->check(CLI::PositiveNumber);

    GridArgs ga;
    auto* grid = app.add_subcommand("grid", "build a polar grid or canonicalize a point set");
    grid->add_flag("--polar", ga.polar, "build a polar grid");
    grid->add_option("--rays", ga.rays, "rays per slice")->check(CLI::PositiveNumber);
    grid->add_option("--radii", ga.radii, "comma-separated strictly increasing radii");
    grid->add_option("--N", ga.N, "number of rotations");
    grid->add_option("--from-points", ga.from_points, "JSON file of planar points");
    grid->add_option("--kind", ga.kind, "spatial or frequency");
    grid->add_option("--out", ga.out, "output grid JSON (stdout if omitted)");

    EvalArgs ea;
    auto* evaluate = app.add_subcommand("evaluate", "evaluate coefficients on a spatial grid");
    evaluate->add_option("--coeffs", ea.coeffs, "coefficient file")->required();
    evaluate->add_option("--grid", ea.grid, "spatial grid JSON")->required();
    evaluate->add_option("--out", ea.out, "output sample file")->required();
    evaluate->add_flag("--naive", ea.naive, "use the dense O(N^2 P Q) path");
    evaluate->add_flag("--check-oracle", ea.check_oracle, "compare the fast path against the dense path");

    SolveArgs ia;
    auto* interp = app.add_subcommand("interpolate", "exact AP interpolation of samples");
    interp->add_option("--samples", ia.samples, "sample file")->required();
    interp->add_option("--freq", ia.freq, "frequency grid JSON (default: the spatial grid)");
    interp->add_option("--out", ia.out, "output coefficient file")->required();

    SolveArgs aa;
    auto* approx = app.add_subcommand("approximate", "weighted AP approximation of samples");
    approx->add_option("--samples", aa.samples, "sample file")->required();
    approx->add_option("--freq", aa.freq, "frequency grid JSON (default: the spatial grid)");
    approx->add_option("--out", aa.out, "output coefficient file")->required();
    approx->add_option("--weights", aa.weights, "weights text file (1 or N rows of Q values) or 'zero'");
    approx->add_option("--weights-scheme", aa.scheme, "built-in radial weights: 'radial'");
    approx->add_option("--alpha", aa.alpha, "scale of the radial weight scheme");

    DemoArgs da;
    auto* demo = app.add_subcommand("demo-image", "interpolation vs approximation under rotation and translation");
    demo->add_option("--image", da.image, "PGM or CSV grayscale image")->required();
    demo->add_option("--grid", da.grid, "spatial grid JSON (default: log-polar E = F grid)");
    demo->add_option("--N", da.opts.N, "rotations of the default grid");
    demo->add_option("--Q", da.opts.slice_points, "slice points of the default grid");
    demo->add_option("--rays", da.opts.rays_per_slice, "rays per slice of the default grid");
    demo->add_option("--rmin", da.opts.r_min, "smallest radius of the default grid");
    demo->add_option("--rmax", da.opts.r_max, "largest radius of the default grid");
    demo->add_option("--alpha", da.alpha, "scale of the radial weight scheme");
    demo->add_option("--xi", da.xi, "translation vector x,y");
    demo->add_option("--steps", da.steps, "rotation in multiples of 2pi/N (default floor(N/6))");
    demo->add_option("--out", da.out, "CSV norm table");
    demo->add_option("--arrays-dir", da.arrays_dir, "directory for the evaluated sample arrays");

    BenchArgs ba;
    auto* bench = app.add_subcommand("bench", "time dense vs factorized paths");
    bench->add_option("--N", ba.N, "rotation counts")->delimiter(',');
    bench->add_option("--Q", ba.Q, "slice point counts (P = Q)")->delimiter(',');
    bench->add_option("--reps", ba.reps, "timed repetitions per measurement (>= 3)");
    bench->add_option("--optimal-N", ba.optimal, "print the balanced N for a grid of this many points");
    bench->add_option("--out", ba.out, "CSV report");
    bench->add_option("--seed", ba.seed, "random seed");

    std::size_t rep_N = 8;
    std::size_t rep_seeds = 100;
    std::uint64_t rep_seed = 1;
    auto* verify = app.add_subcommand("verify-rep", "check representation, unitarity, irreducibility and matrix coefficients");
    verify->add_option("--N", rep_N, "number of rotations");
    verify->add_option("--seeds", rep_seeds, "number of random samples");
    verify->add_option("--seed", rep_seed, "random seed");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kUsage;
    }

    try {
        if (*grid) return run_grid(ga);
        if (*evaluate) return run_evaluate(ea, threads);
        if (*interp) return run_solve(ia, SolveMode::interpolation, threads);
        if (*approx) return run_solve(aa, SolveMode::approximation, threads);
        if (*demo) return run_demo(da, threads);
        if (*bench) return run_bench(ba, threads);
        if (*verify) return run_verify_rep(rep_N, rep_seeds, rep_seed);
    } catch (const UsageError& e) {
        std::cerr << "usage error: " << e.what() << '\n';
        return kUsage;
    } catch (const NotInvariant& e) {
        std::cerr << "grid error: " << e.what() << '\n';
        return kGrid;
    } catch (const TrivialStabilizer& e) {
        std::cerr << "grid error: " << e.what() << '\n';
        return kGrid;
    } catch (const InvalidGrid& e) {
        std::cerr << "grid error: " << e.what() << '\n';
        return kGrid;
    } catch (const WellPosednessError& e) {
        std::cerr << "ill-posed: " << e.what() << '\n';
        return kIllPosed;
    } catch (const GridMismatch& e) {
        std::cerr << "usage error: " << e.what() << '\n';
        return kUsage;
    } catch (const DomainError& e) {
        std::cerr << "usage error: " << e.what() << '\n';
        return kUsage;
    } catch (const Error& e) {
        std::cerr << "I/O error: " << e.what() << '\n';
        return kIo;
    }
    return kUsage;
}
