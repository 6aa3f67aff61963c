#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include "rmf/euler.hpp"
#include "rmf/primes.hpp"
#include "rmf/sampler.hpp"
#include "rmf/util.hpp"

namespace rmf {

/// Tilted phase law of alpha(p) under the two-point change of measure:
///   d(phi) ~ exp(2 Re(z e^{2 pi i phi})),
///   z = f(p) * sum_{j=1,2} eps_{y,u_j}(p) p^{-1/2 - i t_j}.
/// Density, CDF and inverse CDF are evaluated through the Fourier-Bessel
/// expansion exp(a cos psi) = I_0(a) + 2 sum_k I_k(a) cos(k psi), which is
/// exact to machine precision and keeps D strictly increasing; the mean of
/// e^{2 pi i phi} is also available by periodic-trapezoid quadrature.
class TiltedPhaseDensity {
public:
    TiltedPhaseDensity(const FactorTable& table, Twist twist, double y, std::uint64_t p,
                       double t1, double t2, double u1, double u2);

    std::uint64_t prime() const { return p_; }
    double amplitude() const { return a_; }  // a = 2|z|

    double density(double phi) const;
    double cdf(double phi) const;
    /// D^{-1}(x) by Newton with a maintained bracket; 1e-12 absolute. A
    /// failure to converge is an internal fault (throws std::logic_error).
    double inverse_cdf(double x) const;

    /// E[e^{2 pi i phi}] under the tilted law (257-point quadrature).
    cplx mean_alpha() const;

private:
    std::uint64_t p_;
    double a_ = 0.0;      // 2|z|
    double theta_ = 0.0;  // arg z
    std::vector<double> ratios_;  // I_k(a)/I_0(a), k = 1..K
};

/// phi' = D^{-1}(phi): the monotone coupling of the uniform phase to the
/// tilted law.
double coupled_phase(const TiltedPhaseDensity& density, double phi);

struct DeltaPair {
    cplx delta;        // alpha'(p) - alpha(p)
    cplx delta_tilde;  // delta - E[delta]
};

DeltaPair delta_fields(const PhaseAssignment& a, const FactorTable& table, Twist twist,
                       double y, std::uint64_t p, double t1, double t2, double u1, double u2);

/// Residual field G~(t0) = 2 Re sum_{p<=y} f(p) delta_tilde(p) p^{-1/2-i t0}.
double residual_field(const PhaseAssignment& a, const FactorTable& table, Twist twist, double y,
                      double u1, double u2, double t1, double t2, double t0);

struct MeanShift {
    double exact = 0.0;    // G_{y,0}(t0; E[alpha^{u,t}]) by quadrature means
    double leading = 0.0;  // sum_j 2 C_y(|t0 - t_j|; eps_{y,u_j})
};

MeanShift mean_shift(const FactorTable& table, Twist twist, double y, double u1, double u2,
                     double t1, double t2, double t0);

/// Precomputed densities for every prime <= y at a fixed (u, t-pair), for
/// sup-scans of the residual field over many realizations.
class ResidualFieldSampler {
public:
    ResidualFieldSampler(const FactorTable& table, Twist twist, double y, double u1, double u2,
                         double t1, double t2);

    /// max over the t0 grid of |G~(t0)| for one realization.
    double sup_abs(const PhaseAssignment& a, const std::vector<double>& t0_grid) const;

    /// delta_tilde(p) for every prime <= y under this realization.
    std::vector<cplx> delta_tildes(const PhaseAssignment& a) const;

private:
    const FactorTable* table_;
    Twist twist_;
    double y_;
    std::vector<std::uint64_t> primes_;
    std::vector<TiltedPhaseDensity> densities_;
    std::vector<cplx> means_;
};

}  // namespace rmf
