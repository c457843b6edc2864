#pragma once

// Timing and conditioning measurements for the dense and factorized paths.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "se2n/solve.hpp"

namespace se2n {

/// round(sqrt(grid_size / 10)), at least 1. Balances the per-bin Q^2/2 solve against the DFT cost.
inline std::size_t optimal_N(std::size_t grid_size) {
    if (grid_size < 10) throw DomainError("optimal_N needs a grid of at least 10 points");
    const auto n = static_cast<std::size_t>(std::llround(std::sqrt(static_cast<double>(grid_size) / 10.0)));
    return std::max<std::size_t>(n, 1);
}

/// `count` strictly increasing radii, one jittered sample per stratum of
/// [sqrt(N) + 1/2, sqrt(N) + 3/2 + 3 sqrt(total * N)], where total is the slice point count.
/// For these ranges the E = F Fourier-Bessel blocks have been well conditioned in practice.
template <class Rng>
std::vector<double> well_conditioned_radii(std::size_t N, std::size_t count, std::size_t total, Rng& rng) {
    const double lo = std::sqrt(static_cast<double>(N)) + 0.5;
    const double hi = lo + 3.0 * std::sqrt(static_cast<double>(total * N)) + 1.0;
    std::uniform_real_distribution<double> jitter(0.2, 0.8);
    std::vector<double> radii(count);
    for (std::size_t i = 0; i < count; ++i)
        radii[i] = lo + (hi - lo) * (static_cast<double>(i) + jitter(rng)) / static_cast<double>(count);
    return radii;
}

/// Random coefficient matrix with independent standard complex Gaussian entries.
template <class Rng>
ComplexMatrix random_complex(Eigen::Index rows, Eigen::Index cols, Rng& rng) {
    std::normal_distribution<double> g;
    ComplexMatrix m(rows, cols);
    for (Eigen::Index j = 0; j < cols; ++j)
        for (Eigen::Index i = 0; i < rows; ++i) m(i, j) = {g(rng), g(rng)};
    return m;
}

struct ConditioningReport {
    std::vector<double> conditions;  ///< per-bin 2-norm condition numbers
    double min_spatial_distance = 0.0;
    double min_frequency_distance = 0.0;
};

/// sigma_max / sigma_min of one block (infinite when rank deficient).
inline double condition_number(const ComplexMatrix& block) {
    if (block.size() == 0) return 1.0;
    Eigen::BDCSVD<ComplexMatrix> svd(block);
    const auto& sv = svd.singularValues();
    const double lo = sv(sv.size() - 1);
    if (block.rows() < block.cols()) return std::numeric_limits<double>::infinity();
    return lo > 0.0 ? sv(0) / lo : std::numeric_limits<double>::infinity();
}

inline ConditioningReport conditioning_report(const FourierBesselBlocks& fb, unsigned threads = 1) {
    ConditioningReport r;
    r.conditions.assign(fb.N, 0.0);
    parallel_for(fb.N, threads, [&](std::size_t nhat) {
        const ComplexMatrix& b = fb.blocks[nhat];
        if (std::max(b.rows(), b.cols()) <= 512) {
            r.conditions[nhat] = condition_number(b);
        } else {
            Eigen::PartialPivLU<ComplexMatrix> lu(b);
            r.conditions[nhat] = detail::diagonal_ratio(lu.matrixLU().diagonal());
        }
    });
    r.min_spatial_distance = fb.spatial ? fb.spatial->min_pairwise_distance() : 0.0;
    r.min_frequency_distance = fb.frequency ? fb.frequency->min_pairwise_distance() : 0.0;
    return r;
}

struct BenchRecord {
    std::size_t N = 0;
    std::size_t P = 0;
    std::size_t Q = 0;
    unsigned threads = 1;
    double naive_s = 0.0;
    double fast_s = 0.0;           ///< single-threaded factorized evaluation
    double fast_parallel_s = 0.0;  ///< same, bins spread over `threads`
    double prefactorize_s = 0.0;
    double solve_s = 0.0;          ///< full interpolation solve including both DFTs
    double solve_per_bin_s = 0.0;  ///< one triangular-factor solve of a single bin
    double oracle_deviation = 0.0; ///< relative Frobenius deviation of fast from naive
    std::vector<double> conditions;
};

struct BenchReport {
    std::vector<BenchRecord> records;

    std::string to_csv() const {
        std::ostringstream os;
        os << "N,P,Q,threads,naive_s,fast_s,fast_parallel_s,prefactorize_s,solve_s,solve_per_bin_s,"
              "oracle_rel_dev,cond_min,cond_max\n";
        for (const auto& r : records) {
            const auto [lo, hi] = std::minmax_element(r.conditions.begin(), r.conditions.end());
            os << r.N << ',' << r.P << ',' << r.Q << ',' << r.threads << ',' << format_double(r.naive_s) << ','
               << format_double(r.fast_s) << ',' << format_double(r.fast_parallel_s) << ','
               << format_double(r.prefactorize_s) << ',' << format_double(r.solve_s) << ','
               << format_double(r.solve_per_bin_s) << ',' << format_double(r.oracle_deviation) << ','
               << format_double(r.conditions.empty() ? 0.0 : *lo) << ','
               << format_double(r.conditions.empty() ? 0.0 : *hi) << '\n';
        }
        return os.str();
    }
};

namespace detail {
template <class F>
double seconds(F&& f) {
    const auto t0 = std::chrono::steady_clock::now();
    f();
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

/// Median of `repetitions` timings after one discarded warm-up run.
template <class F>
double median_seconds(std::size_t repetitions, F&& f) {
    f();
    std::vector<double> t(repetitions);
    for (auto& v : t) v = seconds(f);
    std::nth_element(t.begin(), t.begin() + static_cast<std::ptrdiff_t>(t.size() / 2), t.end());
    return t[t.size() / 2];
}
}  // namespace detail

struct BenchConfig {
    std::size_t N = 1;
    std::size_t Q = 1;
};

/// Times naive vs factorized evaluation and prefactorize + solve on E = F polar grids with one
/// ray per slice and well-conditioned radii. The fast path is checked against the oracle first.
inline BenchRecord bench_one(const BenchConfig& config, std::size_t repetitions, unsigned threads,
                             std::uint64_t seed = 7) {
    if (repetitions < 3) throw DomainError("benchmarks need at least 3 repetitions");
    std::mt19937_64 rng(seed ^ (config.N * 1000003u + config.Q));
    const auto radii = well_conditioned_radii(config.N, config.Q, config.Q, rng);
    auto E = share(build_polar_grid(1, radii, config.N, GridKind::spatial));
    auto F = share(E->with_kind(GridKind::frequency));
    auto blocks = std::make_shared<const FourierBesselBlocks>(assemble_blocks(E, F, threads));

    const ApCoefficients coeffs(random_complex(static_cast<Eigen::Index>(config.N), static_cast<Eigen::Index>(config.Q), rng), F);

    BenchRecord r;
    r.N = config.N;
    r.P = E->size();
    r.Q = F->size();
    r.threads = threads;

    const SampleArray reference = evaluate_naive(coeffs, E, 1);
    const SampleArray fast = evaluate_fast(coeffs, *blocks, 1);
    const double ref_norm = reference.values().norm();
    r.oracle_deviation = (fast.values() - reference.values()).norm() / (ref_norm > 0.0 ? ref_norm : 1.0);

    r.naive_s = detail::median_seconds(repetitions, [&] { (void)evaluate_naive(coeffs, E, 1); });
    r.fast_s = detail::median_seconds(repetitions, [&] { (void)evaluate_fast(coeffs, *blocks, 1); });
    r.fast_parallel_s = detail::median_seconds(repetitions, [&] { (void)evaluate_fast(coeffs, *blocks, threads); });

    std::optional<BlockFactorization> fact;
    r.prefactorize_s = detail::median_seconds(repetitions, [&] {
        fact.emplace(prefactorize(blocks, SolveMode::interpolation, std::nullopt, threads));
    });
    r.conditions = fact->condition_estimates();
    r.solve_s = detail::median_seconds(repetitions, [&] { (void)interpolate(fast, *fact, threads); });

    // Repeat the per-bin solves until each timing covers roughly a millisecond of work.
    const ComplexMatrix w = dft_rotation_axis(fast.values(), DftDirection::forward);
    const double work = static_cast<double>(config.N) * static_cast<double>(config.Q * config.Q);
    const auto inner = static_cast<std::size_t>(std::max(1.0, 2e6 / work));
    std::vector<Eigen::VectorXcd> rhs(config.N);
    for (std::size_t n = 0; n < config.N; ++n) rhs[n] = w.row(static_cast<Eigen::Index>(n)).transpose();
    Eigen::VectorXcd sink;
    const double all_bins = detail::median_seconds(repetitions, [&] {
        for (std::size_t it = 0; it < inner; ++it)
            for (std::size_t n = 0; n < config.N; ++n) sink = fact->solve_bin(n, rhs[n]);
    });
    r.solve_per_bin_s = all_bins / static_cast<double>(inner * config.N);
    return r;
}

inline BenchReport bench_evaluate(const std::vector<std::size_t>& N_list, const std::vector<std::size_t>& Q_list,
                                  std::size_t repetitions, unsigned threads = 1, std::uint64_t seed = 7) {
    BenchReport report;
    for (std::size_t N : N_list)
        for (std::size_t Q : Q_list) report.records.push_back(bench_one({N, Q}, repetitions, threads, seed));
    return report;
}

}  // namespace se2n
