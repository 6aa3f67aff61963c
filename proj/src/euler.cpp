#include "rmf/euler.hpp"

#include <algorithm>
#include <cmath>

namespace rmf {

ShiftParams ShiftParams::make(double y, double u) {
    if (!(y >= 3.0)) throw std::invalid_argument("ShiftParams: y >= 3 required (log log y > 0)");
    if (!(u >= 0.0)) throw std::invalid_argument("ShiftParams: u >= 0 required");
    ShiftParams p;
    p.y = y;
    p.u = u;
    p.log_y = std::log(y);
    p.sigma = 0.5 * (1.0 + u / p.log_y);
    return p;
}

namespace {

// Local Dirichlet factor of f*alpha at p, evaluated at u1 = alpha(p) p^{-s}.
cplx local_factor(Twist twist, cplx u1, int order) {
    switch (twist) {
        case Twist::one: {
            const cplx d = cplx{1.0, 0.0} - u1;
            if (std::abs(d) < 1e-12) throw pole_error("euler_product: local factor pole");
            return cplx{1.0, 0.0} / d;
        }
        case Twist::moebius:
            return cplx{1.0, 0.0} - u1;
        case Twist::moebius_squared:
            return cplx{1.0, 0.0} + u1;
    }
    (void)order;
    return {1.0, 0.0};
}

double twist_sign(Twist t) { return twist_on_prime(t); }

// Per-prime phase average of exp(2 Re(f(p) alpha(p)) * c) at modulus scale
// c = p^{-sigma}: (1/n) sum_j exp(2 c cos(2 pi j / n)). Spectrally accurate
// for analytic periodic integrands.
double phase_average_exp(double c, int n) {
    KahanSum s;
    for (int j = 0; j < n; ++j) s.add(std::exp(2.0 * c * std::cos(kTwoPi * j / n)));
    return s.value() / n;
}

}  // namespace

cplx euler_product(const PhaseAssignment& a, const FactorTable& table, Twist twist, double y,
                   cplx s, int order) {
    if (!(s.real() > 0.0)) throw std::invalid_argument("euler_product: Re s > 0 required");
    if (order < 1) throw std::invalid_argument("euler_product: order >= 1");
    KahanCplx log_sum;
    const auto primes = table.primes();
    for (std::size_t i = 0; i < primes.size(); ++i) {
        const double p = primes[i];
        if (p > y) break;
        const cplx u1 = a.value(i) * std::exp(-s * std::log(p));
        log_sum.add(std::log(local_factor(twist, u1, order)));
    }
    return std::exp(log_sum.value());
}

double field_g(const PhaseAssignment& a, const FactorTable& table, Twist twist,
               const ShiftParams& params, double t) {
    KahanSum s;
    const double f = twist_sign(twist);
    const auto primes = table.primes();
    for (std::size_t i = 0; i < primes.size(); ++i) {
        const double p = primes[i];
        if (p > params.y) break;
        const cplx u1 = a.value(i) * std::pow(p, -params.sigma) *
                        std::polar(1.0, -t * std::log(p));
        s.add(2.0 * f * u1.real());
    }
    return s.value();
}

double normalizer_m(Model model, const FactorTable& table, Twist twist,
                    const ShiftParams& params, int quad_points) {
    if (quad_points < 3) throw std::invalid_argument("normalizer_m: quad_points >= 3");
    (void)twist;  // |f(p)| = 1 for all supported twists; sign drops under the phase average
    KahanSum log_m;
    const auto primes = table.primes();
    for (std::size_t i = 0; i < primes.size(); ++i) {
        const double p = primes[i];
        if (p > params.y) break;
        const double c = std::pow(p, -params.sigma);
        if (model == Model::gaussian_analog) {
            log_m.add(c * c);
            continue;
        }
        const double v1 = phase_average_exp(c, quad_points);
        const double v2 = phase_average_exp(c, 2 * quad_points + 1);
        if (std::abs(v1 - v2) > 1e-11 * std::abs(v2))
            throw quadrature_error("normalizer_m: phase quadrature did not converge");
        log_m.add(std::log(v2));
    }
    return std::exp(log_m.value());
}

double expected_sq_modulus(const FactorTable& table, Twist twist, const ShiftParams& params) {
    KahanSum log_e;
    const auto primes = table.primes();
    for (std::size_t i = 0; i < primes.size(); ++i) {
        const double p = primes[i];
        if (p > params.y) break;
        const double q = std::pow(p, -2.0 * params.sigma);
        if (twist == Twist::one)
            log_e.add(-std::log1p(-q));
        else
            log_e.add(std::log1p(q));
    }
    return std::exp(log_e.value());
}

EulerGrid EulerGrid::build(const PhaseAssignment& a, const FactorTable& table, Twist twist,
                           const ShiftParams& params, double t_lo, double t_hi, double spacing,
                           const GridOptions& opts) {
    if (!(t_hi > t_lo)) throw std::invalid_argument("EulerGrid: empty t range");
    if (spacing <= 0.0) spacing = default_spacing(params.y);
    const auto n = static_cast<std::size_t>(std::ceil((t_hi - t_lo) / spacing - 1e-12)) + 1;

    EulerGrid g;
    g.params_ = params;
    g.t_lo_ = t_lo;
    g.spacing_ = spacing;
    g.density_.assign(n, opts.want_density ? 1.0 : 0.0);
    if (opts.want_field) g.field_.assign(n, 0.0);
    if (opts.want_log_a) g.log_a_.assign(n, cplx{0.0, 0.0});

    const double f = twist_sign(twist);
    const auto primes = table.primes();
    for (std::size_t i = 0; i < primes.size(); ++i) {
        const double p = primes[i];
        if (p > params.y) break;
        const double lp = std::log(p);
        const cplx rot = std::polar(1.0, -spacing * lp);
        cplx z = a.value(i) * std::pow(p, -params.sigma) * std::polar(1.0, -t_lo * lp);
        if (opts.want_density && !opts.want_field && !opts.want_log_a) {
            // hot path: density only
            double* dens = g.density_.data();
            switch (twist) {
                case Twist::one:
                    for (std::size_t j = 0; j < n; ++j) {
                        dens[j] /= std::norm(cplx{1.0, 0.0} - z);
                        z *= rot;
                    }
                    break;
                case Twist::moebius:
                    for (std::size_t j = 0; j < n; ++j) {
                        dens[j] *= std::norm(cplx{1.0, 0.0} - z);
                        z *= rot;
                    }
                    break;
                case Twist::moebius_squared:
                    for (std::size_t j = 0; j < n; ++j) {
                        dens[j] *= std::norm(cplx{1.0, 0.0} + z);
                        z *= rot;
                    }
                    break;
            }
            continue;
        }
        for (std::size_t j = 0; j < n; ++j) {
            const cplx om = cplx{1.0, 0.0} - z;
            const cplx op = cplx{1.0, 0.0} + z;
            if (opts.want_density) {
                switch (twist) {
                    case Twist::one:
                        g.density_[j] /= std::norm(om);
                        break;
                    case Twist::moebius:
                        g.density_[j] *= std::norm(om);
                        break;
                    case Twist::moebius_squared:
                        g.density_[j] *= std::norm(op);
                        break;
                }
            }
            if (opts.want_field) g.field_[j] += 2.0 * f * z.real();
            if (opts.want_log_a) {
                switch (twist) {
                    case Twist::one:
                        g.log_a_[j] -= std::log(om);
                        break;
                    case Twist::moebius:
                        g.log_a_[j] += std::log(om);
                        break;
                    case Twist::moebius_squared:
                        g.log_a_[j] += std::log(op);
                        break;
                }
            }
            z *= rot;
        }
    }
    g.e_sq_ = expected_sq_modulus(table, twist, params);
    g.m_ = opts.want_m_normalizer ? normalizer_m(a.model(), table, twist, params) : 0.0;
    if (opts.want_density) {
        const double inv = 1.0 / g.e_sq_;
        for (double& d : g.density_) d *= inv;
    }
    return g;
}

double grid_simpson(const std::vector<double>& v, double h) {
    const std::size_t n = v.size();
    if (n < 2) return 0.0;
    if (n == 2) return 0.5 * h * (v[0] + v[1]);
    std::size_t m = n;
    double tail = 0.0;
    if ((n - 1) % 2 != 0) {
        tail = 3.0 * h / 8.0 * (v[n - 4] + 3.0 * v[n - 3] + 3.0 * v[n - 2] + v[n - 1]);
        m = n - 3;
    }
    if (m < 3) return tail;
    KahanSum s;
    for (std::size_t j = 0; j < m; ++j) {
        const double w = (j == 0 || j + 1 == m) ? 1.0 : ((j % 2) ? 4.0 : 2.0);
        s.add(w * v[j]);
    }
    return s.value() * h / 3.0 + tail;
}

double measure_m(const EulerGrid& grid, const std::function<double(double)>& h) {
    std::vector<double> v(grid.size());
    for (std::size_t j = 0; j < v.size(); ++j)
        v[j] = h(grid.t_at(j)) * grid.density_ratio()[j];
    return grid.params().loglog_factor() * grid_simpson(v, grid.spacing());
}

double measure_m_interval(const EulerGrid& grid, double a, double b) {
    if (a < grid.t_lo() - 1e-12 || b > grid.t_hi() + 1e-12)
        throw std::invalid_argument("measure_m_interval: interval not covered by grid");
    const auto& d = grid.density_ratio();
    const std::size_t n = grid.size();
    const double h = grid.spacing();
    // whole-cell core by Simpson, clipped edge cells by trapezoid on the
    // linear interpolant
    const auto t_of = [&](std::size_t j) { return grid.t_at(j); };
    std::size_t j_lo = 0;
    while (j_lo < n && t_of(j_lo) < a - 1e-12) ++j_lo;
    std::size_t j_hi = n;
    while (j_hi > 0 && t_of(j_hi - 1) > b + 1e-12) --j_hi;
    double edges = 0.0;
    if (j_lo > 0 && t_of(j_lo) > a) {
        const double lo = t_of(j_lo - 1);
        const double dl = d[j_lo - 1] + (d[j_lo] - d[j_lo - 1]) * (a - lo) / h;
        edges += 0.5 * (dl + d[j_lo]) * (t_of(j_lo) - a);
    }
    if (j_hi < n && t_of(j_hi - 1) < b) {
        const double lo = t_of(j_hi - 1);
        const double dh = d[j_hi - 1] + (d[j_hi] - d[j_hi - 1]) * (b - lo) / h;
        edges += 0.5 * (d[j_hi - 1] + dh) * (b - lo);
    }
    const std::vector<double> core(d.begin() + static_cast<std::ptrdiff_t>(j_lo),
                                   d.begin() + static_cast<std::ptrdiff_t>(j_hi));
    return grid.params().loglog_factor() * (grid_simpson(core, h) + edges);
}

double measure_nu(const PhaseAssignment& a, const FactorTable& table, Twist twist,
                  const ShiftParams& params, double t_lo, double t_hi, double spacing,
                  std::optional<double> normalizer) {
    if (spacing <= 0.0) spacing = EulerGrid::default_spacing(params.y);
    GridOptions opts;
    opts.want_log_a = false;
    opts.want_field = true;
    opts.want_density = false;
    opts.want_m_normalizer = !normalizer.has_value();
    const EulerGrid g = EulerGrid::build(a, table, twist, params, t_lo, t_hi, spacing, opts);
    const double m = normalizer ? *normalizer : g.normalizer();
    std::vector<double> v(g.size());
    for (std::size_t j = 0; j < v.size(); ++j) v[j] = std::exp(g.field()[j]);
    return params.loglog_factor() / m * grid_simpson(v, spacing);
}

double density_factor_x(const PhaseAssignment& a, const FactorTable& table, Twist twist,
                        const ShiftParams& params, double t) {
    // Three-factor split: X1 collects the deterministic normalizer ratio,
    // X2 compares the full local factor with its k<=2 truncation, X3 strips
    // the first-order exponential off the truncated factor.
    const double f = twist_sign(twist);
    KahanSum log_x;
    const auto primes = table.primes();
    for (std::size_t i = 0; i < primes.size(); ++i) {
        const double p = primes[i];
        if (p > params.y) break;
        const double c = std::pow(p, -params.sigma);
        const cplx u1 = a.value(i) * c * std::polar(1.0, -t * std::log(p));
        const cplx fu1 = f * u1;

        cplx local;       // full local factor
        cplx local2;      // truncated at k = 2
        double e_sq_p;    // E |local|^2
        switch (twist) {
            case Twist::one:
                local = cplx{1.0, 0.0} / (cplx{1.0, 0.0} - u1);
                local2 = cplx{1.0, 0.0} + u1 + u1 * u1;
                e_sq_p = 1.0 / (1.0 - c * c);
                break;
            case Twist::moebius:
                local = cplx{1.0, 0.0} - u1;
                local2 = local;
                e_sq_p = 1.0 + c * c;
                break;
            case Twist::moebius_squared:
                local = cplx{1.0, 0.0} + u1;
                local2 = local;
                e_sq_p = 1.0 + c * c;
                break;
        }
        const double m_p = phase_average_exp(c, 257);
        // X1 X2 X3 per prime, in logs
        log_x.add(std::log(m_p) - std::log(e_sq_p));
        log_x.add(std::log(std::norm(local)) - std::log(std::norm(local2)));
        log_x.add(-2.0 * fu1.real() + std::log(std::norm(local2)));
    }
    return std::exp(log_x.value());
}

double oscillatory_sum_c(const FactorTable& table, Twist twist, double y, double h,
                         OscWeight weight, double u1, double u2) {
    (void)twist;  // |f(p)|^2 = 1 for all supported twists
    if (!(y >= 2.0)) throw std::invalid_argument("oscillatory_sum_c: y >= 2");
    const double ly = std::log(y);
    const double ah = std::abs(h);
    KahanSum s;
    const auto primes = table.primes();
    for (std::size_t i = 0; i < primes.size(); ++i) {
        const double p = primes[i];
        if (p > y) break;
        const double e1 = std::pow(p, -u1 / (2.0 * ly)) - 1.0;
        double v = e1;
        if (weight == OscWeight::eps_u1_eps_u2) v *= std::pow(p, -u2 / (2.0 * ly)) - 1.0;
        s.add(v / p * std::cos(ah * std::log(p)));
    }
    return s.value();
}

ModifiedMomentResult modified_second_moment(Model model, Twist twist, const FactorTable& table,
                                            std::uint64_t master_seed, double y, double u,
                                            double L, double t_lo, double t_hi,
                                            std::size_t trials, double spacing) {
    if (!(L > 0.0)) throw std::invalid_argument("modified_second_moment: L > 0");
    if (trials < 1) throw std::invalid_argument("modified_second_moment: trials >= 1");
    const ShiftParams p0 = ShiftParams::make(y, 0.0);
    const ShiftParams pu = ShiftParams::make(y, u);
    // Normalizers are realization-independent; compute once.
    const double m0 = normalizer_m(model, table, twist, p0);
    const double mu = normalizer_m(model, table, twist, pu);

    ModifiedMomentResult out;
    out.per_trial.resize(trials);
    parallel_for(trials, [&](std::size_t i) {
        PhaseAssignment a(model, trial_seed(master_seed, i));
        const double nu0 = measure_nu(a, table, twist, p0, t_lo, t_hi, spacing, m0);
        const double nuu = (u == 0.0)
                               ? nu0
                               : measure_nu(a, table, twist, pu, t_lo, t_hi, spacing, mu);
        const double d = nu0 - nuu;
        out.per_trial[i] = d * d * std::exp(-L * nu0);
    });
    out.estimate = mean_se(out.per_trial);
    return out;
}

}  // namespace rmf
