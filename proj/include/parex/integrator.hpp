#pragma once

// Fixed-step classical RK4, Hermite interpolation for delay histories, and a
// bounded worker pool for embarrassingly parallel grids.

#include <algorithm>
#include <array>
#include <atomic>
#include <cstddef>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

namespace parex {

template <std::size_t N>
using StateVec = std::array<double, N>;

template <std::size_t N>
StateVec<N> axpy(const StateVec<N>& y, double h, const StateVec<N>& k) {
    StateVec<N> out;
    for (std::size_t i = 0; i < N; ++i) out[i] = y[i] + h * k[i];
    return out;
}

/// One classical RK4 step. `rhs(t, y)` returns dy/dt. When `first_slope`
/// is non-null it receives k1 = rhs(t, y).
template <std::size_t N, class Rhs>
StateVec<N> rk4_step(Rhs&& rhs, double t, const StateVec<N>& y, double h,
                     StateVec<N>* first_slope = nullptr) {
    const StateVec<N> k1 = rhs(t, y);
    if (first_slope) *first_slope = k1;
    const StateVec<N> k2 = rhs(t + 0.5 * h, axpy(y, 0.5 * h, k1));
    const StateVec<N> k3 = rhs(t + 0.5 * h, axpy(y, 0.5 * h, k2));
    const StateVec<N> k4 = rhs(t + h, axpy(y, h, k3));
    StateVec<N> out;
    for (std::size_t i = 0; i < N; ++i)
        out[i] = y[i] + h / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
    return out;
}

/// Cubic Hermite value on an interval of width h at fraction s in [0, 1].
inline double cubic_hermite(double y0, double d0, double y1, double d1, double h, double s) {
    const double s2 = s * s;
    const double s3 = s2 * s;
    return (2 * s3 - 3 * s2 + 1) * y0 + (s3 - 2 * s2 + s) * h * d0 + (-2 * s3 + 3 * s2) * y1 +
           (s3 - s2) * h * d1;
}

struct HermiteSample {
    double value;
    double first;   // d/dt
    double second;  // d2/dt2
};

/// Quintic Hermite through (y, y', y'') at both ends of an interval of width h.
/// Exact for polynomials up to degree five.
inline HermiteSample quintic_hermite(double y0, double d0, double dd0, double y1, double d1,
                                     double dd1, double h, double s) {
    const double s2 = s * s, s3 = s2 * s, s4 = s3 * s, s5 = s4 * s;
    const double h0 = 1 - 10 * s3 + 15 * s4 - 6 * s5;
    const double h1 = s - 6 * s3 + 8 * s4 - 3 * s5;
    const double h2 = 0.5 * (s2 - 3 * s3 + 3 * s4 - s5);
    const double h3 = 0.5 * (s3 - 2 * s4 + s5);
    const double h4 = -4 * s3 + 7 * s4 - 3 * s5;
    const double h5 = 10 * s3 - 15 * s4 + 6 * s5;

    const double g0 = -30 * s2 + 60 * s3 - 30 * s4;
    const double g1 = 1 - 18 * s2 + 32 * s3 - 15 * s4;
    const double g2 = 0.5 * (2 * s - 9 * s2 + 12 * s3 - 5 * s4);
    const double g3 = 0.5 * (3 * s2 - 8 * s3 + 5 * s4);
    const double g4 = -12 * s2 + 28 * s3 - 15 * s4;
    const double g5 = -g0;

    const double f0 = -60 * s + 180 * s2 - 120 * s3;
    const double f1 = -36 * s + 96 * s2 - 60 * s3;
    const double f2 = 0.5 * (2 - 18 * s + 36 * s2 - 20 * s3);
    const double f3 = 0.5 * (6 * s - 24 * s2 + 20 * s3);
    const double f4 = -24 * s + 84 * s2 - 60 * s3;
    const double f5 = -f0;

    const double hh = h * h;
    HermiteSample out;
    out.value = h0 * y0 + h * h1 * d0 + hh * h2 * dd0 + hh * h3 * dd1 + h * h4 * d1 + h5 * y1;
    out.first =
        (g0 * y0 + h * g1 * d0 + hh * g2 * dd0 + hh * g3 * dd1 + h * g4 * d1 + g5 * y1) / h;
    out.second =
        (f0 * y0 + h * f1 * d0 + hh * f2 * dd0 + hh * f3 * dd1 + h * f4 * d1 + f5 * y1) / hh;
    return out;
}

/// Runs fn(i) for i in [0, count) on up to `workers` threads. Results must be
/// written by index; the first exception thrown by any task is rethrown.
template <class Fn>
void parallel_for(std::size_t count, unsigned workers, Fn&& fn) {
    if (workers <= 1 || count <= 1) {
        for (std::size_t i = 0; i < count; ++i) fn(i);
        return;
    }
    std::atomic<std::size_t> next{0};
    std::exception_ptr failure;
    std::mutex failure_mutex;
    auto worker = [&] {
        for (;;) {
            const std::size_t i = next.fetch_add(1);
            if (i >= count) return;
            try {
                fn(i);
            } catch (...) {
                std::lock_guard lock(failure_mutex);
                if (!failure) failure = std::current_exception();
                next.store(count);
                return;
            }
        }
    };
    {
        std::vector<std::jthread> pool;
        const std::size_t n = std::min<std::size_t>(workers, count);
        pool.reserve(n);
        for (std::size_t t = 0; t < n; ++t) pool.emplace_back(worker);
    }
    if (failure) std::rethrow_exception(failure);
}

}  // namespace parex
