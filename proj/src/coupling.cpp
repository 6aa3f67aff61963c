#include "rmf/coupling.hpp"

#include <cmath>

namespace rmf {

namespace {

// I_k(a)/I_0(a) for k = 1.. until the terms drop below 1e-17.
std::vector<double> bessel_i_ratios(double a) {
    std::vector<double> out;
    if (a <= 0.0) return out;
    const double q = 0.25 * a * a;
    const auto bessel_i = [&](int k) {
        double term = 1.0;
        for (int j = 1; j <= k; ++j) term *= 0.5 * a / j;
        double sum = term;
        for (int m = 1; m < 200; ++m) {
            term *= q / (m * (m + k));
            sum += term;
            if (term < 1e-18 * sum) break;
        }
        return sum;
    };
    const double i0 = bessel_i(0);
    for (int k = 1; k < 120; ++k) {
        const double r = bessel_i(k) / i0;
        if (r < 1e-17) break;
        out.push_back(r);
    }
    return out;
}

cplx tilt_vector(const FactorTable& table, Twist twist, double y, std::uint64_t p, double t1,
                 double t2, double u1, double u2) {
    (void)table;
    const double ly = std::log(y);
    const double lp = std::log(static_cast<double>(p));
    const double rs = 1.0 / std::sqrt(static_cast<double>(p));
    const double e1 = std::pow(static_cast<double>(p), -u1 / (2.0 * ly)) - 1.0;
    const double e2 = std::pow(static_cast<double>(p), -u2 / (2.0 * ly)) - 1.0;
    const cplx z = twist_on_prime(twist) * rs *
                   (e1 * std::polar(1.0, -t1 * lp) + e2 * std::polar(1.0, -t2 * lp));
    return z;
}

}  // namespace

TiltedPhaseDensity::TiltedPhaseDensity(const FactorTable& table, Twist twist, double y,
                                       std::uint64_t p, double t1, double t2, double u1,
                                       double u2)
    : p_(p) {
    if (!(y >= 2.0) || static_cast<double>(p) > y)
        throw std::invalid_argument("TiltedPhaseDensity: need p <= y, y >= 2");
    const cplx z = tilt_vector(table, twist, y, p, t1, t2, u1, u2);
    a_ = 2.0 * std::abs(z);
    theta_ = (a_ > 0.0) ? std::arg(z) : 0.0;
    ratios_ = bessel_i_ratios(a_);
}

double TiltedPhaseDensity::density(double phi) const {
    // d(phi) = exp(a cos(2 pi phi + theta)) / I_0(a), via the ratio series
    double s = 1.0;
    const double psi = kTwoPi * phi + theta_;
    for (std::size_t k = 0; k < ratios_.size(); ++k)
        s += 2.0 * ratios_[k] * std::cos((k + 1) * psi);
    return s;
}

double TiltedPhaseDensity::cdf(double phi) const {
    double s = phi;
    const double psi = kTwoPi * phi + theta_;
    for (std::size_t k = 0; k < ratios_.size(); ++k) {
        const double kk = static_cast<double>(k + 1);
        s += ratios_[k] * (std::sin(kk * psi) - std::sin(kk * theta_)) / (kPi * kk);
    }
    return s;
}

double TiltedPhaseDensity::inverse_cdf(double x) const {
    if (x <= 0.0) return 0.0;
    if (x >= 1.0) return 1.0;
    if (ratios_.empty()) return x;  // uniform law: identity map
    double lo = 0.0, hi = 1.0, phi = x;
    for (int it = 0; it < 80; ++it) {
        const double err = cdf(phi) - x;
        if (std::abs(err) < 1e-15) return phi;
        if (err > 0.0)
            hi = phi;
        else
            lo = phi;
        const double d = density(phi);
        double next = phi - err / d;
        if (!(next > lo) || !(next < hi)) next = 0.5 * (lo + hi);
        phi = next;
    }
    if (hi - lo < 1e-12) return 0.5 * (lo + hi);
    throw std::logic_error("TiltedPhaseDensity: inverse_cdf failed to converge");
}

cplx TiltedPhaseDensity::mean_alpha() const {
    if (ratios_.empty()) return {0.0, 0.0};  // uniform law
    // 257-point periodic trapezoid of e^{2 pi i phi} d(phi)
    constexpr int n = 257;
    KahanCplx s;
    for (int j = 0; j < n; ++j) {
        const double phi = static_cast<double>(j) / n;
        s.add(std::polar(1.0, kTwoPi * phi) * density(phi));
    }
    return s.value() / static_cast<double>(n);
}

double coupled_phase(const TiltedPhaseDensity& density, double phi) {
    if (!(phi >= 0.0) || !(phi < 1.0))
        throw std::invalid_argument("coupled_phase: phi in [0,1)");
    return density.inverse_cdf(phi);
}

DeltaPair delta_fields(const PhaseAssignment& a, const FactorTable& table, Twist twist,
                       double y, std::uint64_t p, double t1, double t2, double u1, double u2) {
    const TiltedPhaseDensity d(table, twist, y, p, t1, t2, u1, u2);
    const double phi = a.phase(table.prime_index(p));
    const double phi_c = d.inverse_cdf(phi);
    DeltaPair out;
    out.delta = std::polar(1.0, kTwoPi * phi_c) - std::polar(1.0, kTwoPi * phi);
    out.delta_tilde = out.delta - d.mean_alpha();
    return out;
}

double residual_field(const PhaseAssignment& a, const FactorTable& table, Twist twist, double y,
                      double u1, double u2, double t1, double t2, double t0) {
    const ResidualFieldSampler sampler(table, twist, y, u1, u2, t1, t2);
    const auto deltas = sampler.delta_tildes(a);
    KahanSum s;
    const auto primes = table.primes();
    const double f = twist_on_prime(twist);
    for (std::size_t i = 0; i < deltas.size(); ++i) {
        const double p = primes[i];
        const cplx w = std::polar(1.0 / std::sqrt(p), -t0 * std::log(p));
        s.add(2.0 * (f * deltas[i] * w).real());
    }
    return s.value();
}

MeanShift mean_shift(const FactorTable& table, Twist twist, double y, double u1, double u2,
                     double t1, double t2, double t0) {
    MeanShift out;
    KahanSum exact;
    const double f = twist_on_prime(twist);
    const auto primes = table.primes();
    for (std::size_t i = 0; i < primes.size(); ++i) {
        const std::uint64_t p = primes[i];
        if (static_cast<double>(p) > y) break;
        const TiltedPhaseDensity d(table, twist, y, p, t1, t2, u1, u2);
        const cplx mean = d.mean_alpha();
        const double pd = static_cast<double>(p);
        const cplx w = std::polar(1.0 / std::sqrt(pd), -t0 * std::log(pd));
        exact.add(2.0 * (f * mean * w).real());
    }
    out.exact = exact.value();
    out.leading = 2.0 * oscillatory_sum_c(table, twist, y, t0 - t1, OscWeight::eps_u1, u1, 0.0) +
                  2.0 * oscillatory_sum_c(table, twist, y, t0 - t2, OscWeight::eps_u1, u2, 0.0);
    return out;
}

ResidualFieldSampler::ResidualFieldSampler(const FactorTable& table, Twist twist, double y,
                                           double u1, double u2, double t1, double t2)
    : table_(&table), twist_(twist), y_(y) {
    const auto primes = table.primes();
    for (std::size_t i = 0; i < primes.size(); ++i) {
        const std::uint64_t p = primes[i];
        if (static_cast<double>(p) > y) break;
        primes_.push_back(p);
        densities_.emplace_back(table, twist, y, p, t1, t2, u1, u2);
        means_.push_back(densities_.back().mean_alpha());
    }
}

std::vector<cplx> ResidualFieldSampler::delta_tildes(const PhaseAssignment& a) const {
    std::vector<cplx> out(primes_.size());
    for (std::size_t i = 0; i < primes_.size(); ++i) {
        const double phi = a.phase(i);
        const double phi_c = densities_[i].inverse_cdf(phi);
        const cplx delta = std::polar(1.0, kTwoPi * phi_c) - std::polar(1.0, kTwoPi * phi);
        out[i] = delta - means_[i];
    }
    return out;
}

double ResidualFieldSampler::sup_abs(const PhaseAssignment& a,
                                     const std::vector<double>& t0_grid) const {
    const auto deltas = delta_tildes(a);
    const double f = twist_on_prime(twist_);
    double best = 0.0;
    for (double t0 : t0_grid) {
        KahanSum s;
        for (std::size_t i = 0; i < primes_.size(); ++i) {
            const double pd = static_cast<double>(primes_[i]);
            const cplx w = std::polar(1.0 / std::sqrt(pd), -t0 * std::log(pd));
            s.add(2.0 * (f * deltas[i] * w).real());
        }
        best = std::max(best, std::abs(s.value()));
    }
    return best;
}

}  // namespace rmf
