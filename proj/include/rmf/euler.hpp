#pragma once

#include <complex>
#include <cstdint>
#include <functional>
#include <optional>
#include <vector>

#include "rmf/primes.hpp"
#include "rmf/sampler.hpp"
#include "rmf/util.hpp"

namespace rmf {

struct pole_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct quadrature_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Critical-line shift sigma_y(u) = (1/2)(1 + u/log y) and the per-prime
/// perturbation eps_{y,u}(p) = p^{-u/(2 log y)} - 1 (in (-1, 0], zero at u=0).
struct ShiftParams {
    double y = 3.0;
    double u = 0.0;
    double sigma = 0.5;
    double log_y = 0.0;

    static ShiftParams make(double y, double u);
    double eps(double p) const { return std::pow(p, -u / (2.0 * log_y)) - 1.0; }
    double loglog_factor() const { return std::sqrt(std::log(log_y)); }
};

/// A_y(s) for the realization: product over p <= y of the local factor of
/// f alpha, accumulated in log space. Twist one uses the closed geometric
/// form (pole error if 1 - alpha(p) p^{-s} vanishes within 1e-12); moebius
/// twists terminate; order bounds the series for hypothetical other twists.
cplx euler_product(const PhaseAssignment& a, const FactorTable& table, Twist twist, double y,
                   cplx s, int order = 24);

/// G_{y,u}(t) = 2 Re sum_{p<=y} f(p) alpha(p) p^{-sigma_y(u)-it}.
double field_g(const PhaseAssignment& a, const FactorTable& table, Twist twist,
               const ShiftParams& params, double t);

/// M_y(u) = E[exp G_{y,u}(t)], a product of per-prime phase averages
/// (257-point periodic trapezoid by default; doubled once as a convergence
/// check). Independent of t. Closed form for the Gaussian-analog model.
double normalizer_m(Model model, const FactorTable& table, Twist twist,
                    const ShiftParams& params, int quad_points = 257);

/// E|A_y(sigma_y(u)+it)|^2 under the Steinhaus model (exact Euler factors).
double expected_sq_modulus(const FactorTable& table, Twist twist, const ShiftParams& params);

struct GridOptions {
    bool want_log_a = true;
    bool want_field = true;
    bool want_density = true;
    bool want_m_normalizer = true;  // the phase-quadrature M_y(u); skip in hot paths
};

/// Uniform t-grid holding |A_y(sigma+it)|^2 / E|A_y|^2 (the m_{y,u} density),
/// the first-order field G, and optionally log A_y.
class EulerGrid {
public:
    static double default_spacing(double y) {
        return std::min(0.01, 1.0 / (4.0 * std::log(y)));
    }

    static EulerGrid build(const PhaseAssignment& a, const FactorTable& table, Twist twist,
                           const ShiftParams& params, double t_lo, double t_hi,
                           double spacing = 0.0, const GridOptions& opts = {});

    const ShiftParams& params() const { return params_; }
    double t_lo() const { return t_lo_; }
    double t_hi() const { return t_lo_ + spacing_ * static_cast<double>(density_.size() - 1); }
    double spacing() const { return spacing_; }
    std::size_t size() const { return density_.size(); }
    double t_at(std::size_t j) const { return t_lo_ + spacing_ * static_cast<double>(j); }

    double normalizer() const { return m_; }          // M_y(u)
    double expected_sq() const { return e_sq_; }      // E|A_y|^2

    const std::vector<double>& density_ratio() const { return density_; }
    const std::vector<double>& field() const { return field_; }
    const std::vector<cplx>& log_a() const { return log_a_; }

private:
    ShiftParams params_;
    double t_lo_ = 0, spacing_ = 0;
    double m_ = 1.0, e_sq_ = 1.0;
    std::vector<double> density_;  // |A|^2 / E|A|^2 per gridpoint
    std::vector<double> field_;    // G(t) per gridpoint
    std::vector<cplx> log_a_;      // optional
};

/// Composite Simpson over uniform grid point values (3/8 panel closes odd
/// interval counts); the 4th-order rule keeps measure integrals stable under
/// grid refinement at the default field spacing.
double grid_simpson(const std::vector<double>& values, double spacing);

/// m_{y,u}(h) = sqrt(log log y) * int h(t) |A|^2/E|A|^2 dt on the grid.
/// h is sampled at the gridpoints; it must be supported inside the grid
/// (use measure_m_interval for indicators).
double measure_m(const EulerGrid& grid, const std::function<double(double)>& h);

/// m_{y,u} of the indicator of [a,b]; throws if [a,b] is not covered.
double measure_m_interval(const EulerGrid& grid, double a, double b);

/// nu_{y,u}(I) = sqrt(log log y)/M_y(u) * int_I exp G(t) dt, trapezoid with
/// the given spacing (default_spacing(y) when 0). Pass a precomputed M to
/// skip the per-call quadrature.
double measure_nu(const PhaseAssignment& a, const FactorTable& table, Twist twist,
                  const ShiftParams& params, double t_lo, double t_hi, double spacing = 0.0,
                  std::optional<double> normalizer = std::nullopt);

/// Density factor X_{y,u}(t) = X1 * X2 * X3 linking m and nu:
/// m_{y,u}(dt) = X_{y,u}(t) nu_{y,u}(dt).
double density_factor_x(const PhaseAssignment& a, const FactorTable& table, Twist twist,
                        const ShiftParams& params, double t);

enum class OscWeight { eps_u1, eps_u1_eps_u2 };

/// C_y(h; v) = sum_{p<=y} |f(p)|^2 / p * v(p) cos(|h| log p) with
/// v = eps_{y,u1} or eps_{y,u1} eps_{y,u2}.
double oscillatory_sum_c(const FactorTable& table, Twist twist, double y, double h,
                         OscWeight weight, double u1, double u2);

struct ModifiedMomentResult {
    MeanSe estimate;                 // E[ |nu_{y,0}(I) - nu_{y,u}(I)|^2 e^{-L nu_{y,0}(I)} ]
    std::vector<double> per_trial;
};

/// Monte Carlo of the damped second moment over fresh realizations.
ModifiedMomentResult modified_second_moment(Model model, Twist twist, const FactorTable& table,
                                            std::uint64_t master_seed, double y, double u,
                                            double L, double t_lo, double t_hi,
                                            std::size_t trials, double spacing = 0.0);

}  // namespace rmf
