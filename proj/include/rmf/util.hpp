#pragma once

#include <algorithm>
#include <atomic>
#include <cmath>
#include <complex>
#include <cstdint>
#include <cstdlib>
#include <functional>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

namespace rmf {

using cplx = std::complex<double>;

inline constexpr double kPi = 3.14159265358979323846264338327950288;
inline constexpr double kTwoPi = 2.0 * kPi;
// Euler-Mascheroni, 30 digits.
inline constexpr double kEulerGamma = 0.577215664901532860606512090082;

// ---------------------------------------------------------------------------
// Counter-mode PRF (splitmix64 finalizer chain). All randomness in the
// library is derived from (seed, counter...) through this, so every value is
// reproducible and queryable out of order.
// ---------------------------------------------------------------------------

inline std::uint64_t mix64(std::uint64_t z) {
    z += 0x9e3779b97f4a7c15ULL;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

inline std::uint64_t prf(std::uint64_t seed, std::uint64_t a, std::uint64_t b = 0) {
    std::uint64_t h = mix64(seed ^ 0x6a09e667f3bcc908ULL);
    h = mix64(h ^ a);
    h = mix64(h ^ (b + 0x9e3779b97f4a7c15ULL));
    return h;
}

// Uniform in [0,1) from 53 high bits.
inline double u01(std::uint64_t bits) {
    return static_cast<double>(bits >> 11) * 0x1.0p-53;
}

// Uniform in (0,1], safe as a log() argument.
inline double u01_open(std::uint64_t bits) {
    return (static_cast<double>(bits >> 11) + 1.0) * 0x1.0p-53;
}

// Standard complex Gaussian (E z = 0, E|z|^2 = 1) from two PRF words.
inline cplx gaussian_complex(std::uint64_t w1, std::uint64_t w2) {
    const double r = std::sqrt(-std::log(u01_open(w1)));
    const double phi = kTwoPi * u01(w2);
    return {r * std::cos(phi), r * std::sin(phi)};
}

// Deterministic per-trial seed derivation.
inline std::uint64_t trial_seed(std::uint64_t master_seed, std::uint64_t trial) {
    return prf(master_seed, trial, 0x7261696c5f736565ULL);
}

// ---------------------------------------------------------------------------
// Parallel trial loop. Results land in a caller-indexed vector, so the final
// reduction order is fixed and aggregates are bit-identical regardless of the
// worker count.
// ---------------------------------------------------------------------------

inline unsigned worker_count() {
    if (const char* env = std::getenv("RMF_LAB_THREADS")) {
        const long v = std::strtol(env, nullptr, 10);
        if (v >= 1) return static_cast<unsigned>(v);
    }
    const unsigned hw = std::thread::hardware_concurrency();
    return hw ? hw : 1;
}

template <typename Fn>  // Fn(std::size_t index)
void parallel_for(std::size_t n, Fn&& fn, unsigned workers = 0) {
    if (workers == 0) workers = worker_count();
    if (workers <= 1 || n <= 1) {
        for (std::size_t i = 0; i < n; ++i) fn(i);
        return;
    }
    workers = std::min<std::size_t>(workers, n);
    std::vector<std::thread> pool;
    pool.reserve(workers);
    std::atomic<std::size_t> next{0};
    for (unsigned w = 0; w < workers; ++w) {
        pool.emplace_back([&] {
            for (;;) {
                const std::size_t i = next.fetch_add(1);
                if (i >= n) return;
                fn(i);
            }
        });
    }
    for (auto& t : pool) t.join();
}

// ---------------------------------------------------------------------------
// Compensated accumulation: cheap protection for the long alternating sums
// that the exact Plancherel sweep produces.
// ---------------------------------------------------------------------------

struct KahanSum {
    double s = 0.0, c = 0.0;
    void add(double x) {
        const double y = x - c;
        const double t = s + y;
        c = (t - s) - y;
        s = t;
    }
    double value() const { return s; }
};

struct KahanCplx {
    KahanSum re, im;
    void add(cplx z) {
        re.add(z.real());
        im.add(z.imag());
    }
    cplx value() const { return {re.value(), im.value()}; }
};

// ---------------------------------------------------------------------------
// Quadrature helpers.
// ---------------------------------------------------------------------------

// 32-point Gauss-Legendre nodes/weights on [-1,1] (positive half; symmetric).
const std::vector<std::pair<double, double>>& gauss_legendre_32();

// Composite Gauss-Legendre over [a,b] split into nseg panels.
double gauss_quad(const std::function<double(double)>& f, double a, double b, int nseg = 8);

// Adaptive Simpson to absolute tolerance tol.
double adaptive_simpson(const std::function<double(double)>& f, double a, double b,
                        double tol, int max_depth = 40);

struct MeanSe {
    double mean = 0.0;
    double se = 0.0;   // standard error of the mean
    std::size_t n = 0;
};

MeanSe mean_se(const std::vector<double>& xs);

}  // namespace rmf
