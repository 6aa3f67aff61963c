#pragma once

#include <cstdint>
#include <functional>
#include <utility>
#include <vector>

#include "rmf/util.hpp"

namespace rmf {

/// Dickman's rho on a uniform grid, advanced through the integral form of
/// the delay equation t rho(t) = int_{t-1}^t rho(v) dv with an implicit
/// 4th-order Adams-Moulton cell rule. Working with the integral relation
/// keeps the relative error multiplicative, so rho stays positive and
/// monotone down to the ~1e-21 values near v = 20. Interpolation stencils
/// never straddle the integer kink points.
class DickmanTable {
public:
    static DickmanTable build(double v_max = 20.0, double step = 1e-4);

    double v_max() const { return v_max_; }
    double step() const { return h_; }

    /// Interpolated rho(v); throws outside [0, v_max].
    double rho(double v) const;

    /// int_{t-1}^t rho - t rho(t), from the table's own prefix integrals.
    double delay_residual(double t) const;

    /// Table-side Laplace transform int_0^{v_max} e^{-tv} rho(v) dv.
    double laplace_table_side(double t) const;

private:
    double interp(double v) const;
    double v_max_ = 0.0, h_ = 0.0;
    std::vector<double> rho_;     // rho at grid points
    std::vector<double> prefix_;  // int_0^{t_i} rho, same cell rule
};

/// Right side of the Laplace identity:
/// exp(gamma - int_0^t (1 - e^{-s})/s ds).
double dickman_laplace(double t);

struct TshiftRatio {
    double empirical = 0.0;  // sum over y-smooth n of n^{-(1+t/log y)}, via the Euler product
    double predicted = 0.0;  // dickman_laplace(t) * log y
    double ratio = 0.0;
};

/// Comparison of the shifted smooth Dirichlet sum with its log-y asymptote. Uses a streamed segmented sieve, so y may exceed any table.
TshiftRatio tshift_ratio(double y, double t);

/// Brute-force companion: sum of n^{-a} over y-smooth n <= limit.
double smooth_dirichlet_sum_enum(double y, double a, std::uint64_t limit);

/// C(k, eps, delta) = (eps + k delta) *
///   int_{max((1-eps-(k+1)delta)/(eps+k delta), 0)}^{max((1-eps-k delta)/(eps+k delta), 0)}
///     rho(v) (1 - (eps + k delta) v)^{-1} dv,
/// with panels split at the integer kinks of rho and the 1/(eps+k delta) cap.
double bracket_constant(const DickmanTable& table, int k, double eps, double delta);

/// C_{eps,delta} = sum_{k=0}^{K} C(k, eps, delta), K = floor((1-eps)/delta).
double bracket_constant_sum(const DickmanTable& table, double eps, double delta);

/// G_{eps,delta}(v): the direct sum over admissible k.
double g_eps_delta(double v, double eps, double delta);

/// int_0^A g(v) [ 1{ frac((1/(v+1)-eps)/delta) < 1/(v+1) } - 1/(v+1) ] dv
/// with the indicator's discontinuities resolved analytically.
double equid_integral(double eps, double delta, double a_lim,
                      const std::function<double(double)>& g);

/// Fit a polynomial of degree points.size()-1 through (h_i, value_i) and
/// return its value at h = 0.
double richardson_extrapolate(const std::vector<std::pair<double, double>>& points);

}  // namespace rmf
