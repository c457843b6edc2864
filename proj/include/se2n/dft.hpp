#pragma once

#include <cmath>
#include <mutex>

#include <fftw3.h>

#include "se2n/bessel.hpp"

namespace se2n {

enum class DftDirection { forward, inverse };

namespace detail {
// The FFTW planner is not reentrant; execution of an existing plan is.
inline std::mutex& fftw_planner_mutex() {
    static std::mutex m;
    return m;
}
}  // namespace detail

/// Unitary DFT along axis 0 (the rotation index) of an N x M matrix, one transform per column.
/// forward: out(nhat, c) = N^{-1/2} sum_h e^{-2 pi i nhat h / N} in(h, c); inverse is its adjoint.
inline ComplexMatrix dft_rotation_axis(const ComplexMatrix& in, DftDirection direction) {
    const int N = static_cast<int>(in.rows());
    const int M = static_cast<int>(in.cols());
    ComplexMatrix out(in.rows(), in.cols());
    if (N == 0 || M == 0) return out;
    if (N == 1) return in;

    ComplexMatrix src = in;  // FFTW takes non-const input pointers
    auto* ip = reinterpret_cast<fftw_complex*>(src.data());
    auto* op = reinterpret_cast<fftw_complex*>(out.data());
    const int sign = direction == DftDirection::forward ? FFTW_FORWARD : FFTW_BACKWARD;
    fftw_plan plan = nullptr;
    {
        std::lock_guard lock(detail::fftw_planner_mutex());
        // column-major storage: each column is contiguous, columns are N apart
        plan = fftw_plan_many_dft(1, &N, M, ip, nullptr, 1, N, op, nullptr, 1, N, sign, FFTW_ESTIMATE);
    }
    if (!plan) throw Error("FFTW failed to create a plan");
    fftw_execute(plan);
    {
        std::lock_guard lock(detail::fftw_planner_mutex());
        fftw_destroy_plan(plan);
    }
    out *= 1.0 / std::sqrt(static_cast<double>(N));
    return out;
}

}  // namespace se2n
