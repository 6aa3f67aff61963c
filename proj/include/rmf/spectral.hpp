#pragma once

#include <complex>
#include <cstdint>
#include <span>
#include <vector>

#include "rmf/primes.hpp"
#include "rmf/sampler.hpp"
#include "rmf/util.hpp"

namespace rmf {

/// Right-continuous-from-the-left step function on [0, A]:
/// value(u) = c_j for u in (b_{j-1}, b_j], 0 for u > A or u <= 0.
/// Convention chosen so that Phi = 1_[0,1] keeps exactly n <= x in sums of
/// Phi(n/x).
class StepFunction {
public:
    StepFunction(std::vector<double> breakpoints, std::vector<cplx> values);

    static StepFunction unit_indicator() { return StepFunction({0.0, 1.0}, {cplx{1.0, 0.0}}); }
    static StepFunction indicator(double a) { return StepFunction({0.0, a}, {cplx{1.0, 0.0}}); }

    std::size_t pieces() const { return values_.size(); }
    const std::vector<double>& breakpoints() const { return breaks_; }
    const std::vector<cplx>& values() const { return values_; }
    double support_bound() const { return breaks_.back(); }
    double max_abs() const;
    double l2_norm_sq() const;

    cplx eval(double u) const;

    StepFunction scaled_arg(double lambda) const;   // u -> Phi(u / lambda)
    StepFunction scaled_value(cplx lambda) const;   // Phi -> lambda * Phi
    static StepFunction sum(const StepFunction& f, const StepFunction& g);

private:
    std::vector<double> breaks_;  // b_0 = 0 < b_1 < ... < b_m = A
    std::vector<cplx> values_;    // c_1..c_m
};

/// K_Phi(s) = int_0^inf Phi(x) x^{s-1} dx = sum_j c_j (b_j^s - b_{j-1}^s)/s,
/// in closed form; |s| < 1e-6 switches the positive-endpoint pieces to a
/// series in s (the b_0 = 0 piece keeps its b_1^s / s form, which is the
/// genuine singularity when c_1 != 0).
cplx mellin(const StepFunction& step, cplx s);

/// All y-smooth integers in [1, limit], ascending. DFS over the primes <= y,
/// so the cost scales with the output size, not with limit.
std::vector<std::uint64_t> smooth_numbers(std::span<const std::uint32_t> primes, double y,
                                          std::uint64_t limit);

/// A y-smooth support list with per-realization alpha values and prefix sums,
/// shared by the weighted-sum kernels below.
struct SmoothList {
    double y = 0;
    std::vector<std::uint64_t> numbers;  // ascending
    std::vector<cplx> prefix;            // prefix[i] = sum of alpha over numbers[0..i)

    static SmoothList build(const PhaseAssignment& a, const FactorTable& table, double y,
                            std::uint64_t limit);
    /// Rebuild prefix sums for a new realization over the same support.
    void reassign(const PhaseAssignment& a, const FactorTable& table);
};

/// sum over the list of alpha(m) Phi(m*w / x), evaluated with the same
/// double-precision boundary comparisons as StepFunction::eval so that
/// regroupings agree bit for bit with direct passes.
cplx smooth_step_sum(const SmoothList& list, const StepFunction& step, std::uint64_t w,
                     double x);

/// s_{x,y} = x^{-1/2} sum_{P(n)<=y} alpha(n) Phi(n/x); the table must cover
/// A*x.
cplx smooth_sum_s(const PhaseAssignment& a, const FactorTable& table,
                  const StepFunction& step, double x, double y);

/// Same, reusing a prepared list (support limit must be >= A*x).
cplx smooth_sum_s(const SmoothList& list, const StepFunction& step, double x);

struct PlancherelOptions {
    double r = 0.1;              // weight dt / t^{1+r}; r = 0 allowed (dt/t)
    double rhs_t0 = 50.0;        // initial frequency cutoff, doubled as needed
    double rhs_rel_tail = 1e-3;  // stop once the rigorous tail bound is below this (relative)
    double rhs_t_cap = 4.0e6;    // hard cutoff for the doubling schedule
    double lhs_t_max = 1.0e7;    // time-side sweep horizon (auto-extended up to lhs_t_cap)
    double lhs_t_cap = 2.0e8;
    double head_spacing = 0.02;  // quadrature spacing for |t| <= 200
    double tail_spacing = 0.10;
};

struct PlancherelResult {
    double lhs = 0;              // exact piecewise integral of |s_{t,y}|^2 dt/t^{1+r}
    double rhs = 0;              // frequency-side quadrature over |t| <= rhs_t_used
    double rhs_tail_bound = 0;   // rigorous bound on the omitted |t| > rhs_t_used mass
    double lhs_tail_estimate = 0;  // 4x the last-octave contribution of the sweep
    double rhs_t_used = 0;
    double lhs_t_used = 0;
};

/// Machine-checkable Plancherel identity
///   int_0^inf |s_{t,y}|^2 dt/t^{1+r}
///     = (1/2pi) int_R |A_y(1/2 + r/2 + it) K_Phi(1/2 + r/2 + it)|^2 dt.
/// The left side is integrated exactly (sqrt(t) s_{t,y} is piecewise constant
/// with jumps at t = n/b_j); the right side by composite Simpson with a
/// deterministic sup-norm tail bound for A_y.
PlancherelResult plancherel_check(const PhaseAssignment& a, const FactorTable& table,
                                  const StepFunction& step, double y,
                                  const PlancherelOptions& opts);

struct VProxyOptions {
    double t_max = 50.0;
    double spacing = 0.0;  // 0: min(0.01, 1/(4 log y))
};

struct VProxyResult {
    double value = 0;            // (1/2pi) int_{|t|<=T} |K(1/2+it)|^2 m_{y,0}(dt)
    double tail_mean_bound = 0;  // bound on the expected omitted mass
    double t_max = 0;
};

/// Finite-y proxy of the limit variance weight: the |K_Phi|^2-weighted mass
/// of the normalized Euler-product density at u = 0.
VProxyResult v_infinity_proxy(const PhaseAssignment& a, const FactorTable& table,
                              const StepFunction& step, double y, const VProxyOptions& opts = {});

}  // namespace rmf
