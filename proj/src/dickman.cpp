#include "rmf/dickman.hpp"

#include <algorithm>
#include <cmath>

#include "rmf/primes.hpp"

namespace rmf {

DickmanTable DickmanTable::build(double v_max, double step) {
    if (!(v_max > 2.0) || !(step > 0.0))
        throw std::invalid_argument("DickmanTable: need v_max > 2, step > 0");
    DickmanTable t;
    t.v_max_ = v_max;
    t.h_ = step;
    const auto n1 = static_cast<std::size_t>(std::llround(1.0 / step));
    if (std::abs(n1 * step - 1.0) > 1e-12)
        throw std::invalid_argument("DickmanTable: step must divide 1");
    const auto n = static_cast<std::size_t>(std::llround(v_max / step));
    t.rho_.assign(n + 1, 1.0);
    t.prefix_.assign(n + 1, 0.0);

    const double h = step;
    for (std::size_t i = 1; i <= n1; ++i) t.prefix_[i] = i * h;

    // Advance the windowed integral W(t) = int_{t-1}^t rho = t rho(t) with
    // the AM3 cell rule
    //   cell(i) = int_{t_{i-1}}^{t_i} rho
    //           = h/24 (9 r_i + 19 r_{i-1} - 5 r_{i-2} + r_{i-3}).
    // W is updated incrementally, W_i = W_{i-1} + cell(i) - cell(i - n1),
    // which keeps the error relative to the local scale of rho; forming W as
    // a difference of absolute prefix integrals would cancel catastrophically
    // once t rho(t) drops below ~1e-15.
    // Startup across the t = 1 kink: while the history is constant the
    // relation integrates exactly to rho = 1 - log t, so the first three
    // nodes and cells past the kink come from that local solution; the AM3
    // stencil would otherwise model the kink with an O(h^2) cell error.
    const auto exact_cell_12 = [&](double lo, double hi) {
        return (2.0 * hi - hi * std::log(hi)) - (2.0 * lo - lo * std::log(lo));
    };
    for (std::size_t k = 1; k <= 3; ++k) t.rho_[n1 + k] = 1.0 - std::log(1.0 + k * h);

    const auto cell = [&](std::size_t j) {
        if (j <= n1) return h;  // rho = 1 on [0, 1]: the cell integral is exact
        if (j <= n1 + 3) return exact_cell_12((j - n1 - 1) * h + 1.0, (j - n1) * h + 1.0);
        return h / 24.0 *
               (9.0 * t.rho_[j] + 19.0 * t.rho_[j - 1] - 5.0 * t.rho_[j - 2] + t.rho_[j - 3]);
    };
    double w = 1.0;  // int_0^1 rho
    for (std::size_t k = 1; k <= 3; ++k) {
        w += cell(n1 + k) - h;
        t.prefix_[n1 + k] = t.prefix_[n1 + k - 1] + cell(n1 + k);
    }
    const std::size_t rebase_every = std::max<std::size_t>(n1 / 16, 1);
    for (std::size_t i = n1 + 4; i <= n; ++i) {
        const double ti = i * h;
        const double known =
            w - cell(i - n1) +
            h / 24.0 * (19.0 * t.rho_[i - 1] - 5.0 * t.rho_[i - 2] + t.rho_[i - 3]);
        t.rho_[i] = known / (ti - 9.0 * h / 24.0);
        w = known + 9.0 * h / 24.0 * t.rho_[i];
        t.prefix_[i] = t.prefix_[i - 1] + cell(i);
        if (i % rebase_every == 0) {
            // resum the live window; the incremental w keeps an absolute
            // rounding remanent from the epoch when w was O(1), which would
            // otherwise floor the far tail
            KahanSum fresh;
            for (std::size_t j = i - n1 + 1; j <= i; ++j) fresh.add(cell(j));
            w = fresh.value();
        }
    }
    return t;
}

double DickmanTable::interp(double v) const {
    // cubic Lagrange on four grid points chosen inside the unit interval
    // containing v, so stencils never cross the integer kinks
    const double fi = v / h_;
    auto i0 = static_cast<std::ptrdiff_t>(std::floor(fi)) - 1;
    double unit_lo = std::floor(v);
    if (unit_lo >= v - 1e-12 && unit_lo > 0.0) unit_lo -= 1.0;  // integer v: use the left piece
    const auto lo_idx = static_cast<std::ptrdiff_t>(std::llround(unit_lo / h_));
    const auto hi_idx = std::min<std::ptrdiff_t>(
        static_cast<std::ptrdiff_t>(rho_.size()) - 1,
        static_cast<std::ptrdiff_t>(std::llround((unit_lo + 1.0) / h_)));
    i0 = std::clamp(i0, lo_idx, hi_idx - 3);
    i0 = std::max<std::ptrdiff_t>(i0, 0);
    double out = 0.0;
    for (int j = 0; j < 4; ++j) {
        double lj = 1.0;
        for (int m = 0; m < 4; ++m)
            if (m != j)
                lj *= (fi - static_cast<double>(i0 + m)) / static_cast<double>(j - m);
        out += lj * rho_[static_cast<std::size_t>(i0 + j)];
    }
    return out;
}

double DickmanTable::rho(double v) const {
    if (v < 0.0 || v > v_max_ + 1e-12) throw std::out_of_range("DickmanTable::rho: v out of range");
    if (v <= 1.0) return 1.0;
    return interp(std::min(v, v_max_));
}

double DickmanTable::delay_residual(double t) const {
    if (t < 1.0 || t > v_max_) throw std::out_of_range("delay_residual: t in [1, v_max]");
    // prefix at non-grid t by cubic interpolation of the prefix array
    const auto pre = [&](double v) {
        const double fi = v / h_;
        auto i0 = static_cast<std::ptrdiff_t>(std::floor(fi)) - 1;
        i0 = std::clamp<std::ptrdiff_t>(i0, 0, static_cast<std::ptrdiff_t>(prefix_.size()) - 4);
        double out = 0.0;
        for (int j = 0; j < 4; ++j) {
            double lj = 1.0;
            for (int m = 0; m < 4; ++m)
                if (m != j)
                    lj *= (fi - static_cast<double>(i0 + m)) / static_cast<double>(j - m);
            out += lj * prefix_[static_cast<std::size_t>(i0 + j)];
        }
        return out;
    };
    return pre(t) - pre(t - 1.0) - t * rho(t);
}

double DickmanTable::laplace_table_side(double t) const {
    // composite Simpson on the table grid
    KahanSum s;
    const std::size_t n = rho_.size() - 1;
    for (std::size_t i = 0; i <= n; ++i) {
        const double w = (i == 0 || i == n) ? 1.0 : ((i % 2) ? 4.0 : 2.0);
        s.add(w * std::exp(-t * (i * h_)) * rho_[i]);
    }
    return s.value() * h_ / 3.0;
}

double dickman_laplace(double t) {
    if (!(t >= 0.0)) throw std::invalid_argument("dickman_laplace: t >= 0");
    if (t == 0.0) return std::exp(kEulerGamma);
    const auto f = [](double s) { return s == 0.0 ? 1.0 : -std::expm1(-s) / s; };
    const double integral = adaptive_simpson(f, 0.0, t, 1e-13);
    return std::exp(kEulerGamma - integral);
}

TshiftRatio tshift_ratio(double y, double t) {
    if (!(y >= 3.0) || !(t >= 0.0)) throw std::invalid_argument("tshift_ratio: y >= 3, t >= 0");
    const double ly = std::log(y);
    const double expo = 1.0 + t / ly;
    KahanSum log_sum;
    for_each_prime(2, static_cast<std::uint64_t>(y), [&](std::uint64_t p) {
        log_sum.add(-std::log1p(-std::pow(static_cast<double>(p), -expo)));
    });
    TshiftRatio out;
    out.empirical = std::exp(log_sum.value());
    out.predicted = dickman_laplace(t) * ly;
    out.ratio = out.empirical / out.predicted;
    return out;
}

double smooth_dirichlet_sum_enum(double y, double a, std::uint64_t limit) {
    std::vector<std::uint64_t> ps;
    for_each_prime(2, static_cast<std::uint64_t>(y), [&](std::uint64_t p) { ps.push_back(p); });
    KahanSum s;
    s.add(1.0);
    std::vector<std::pair<std::uint64_t, std::size_t>> stack{{1, 0}};
    while (!stack.empty()) {
        auto [n, k] = stack.back();
        stack.pop_back();
        for (std::size_t i = k; i < ps.size(); ++i) {
            const std::uint64_t np = n * ps[i];
            if (np / ps[i] != n || np > limit) break;
            s.add(std::pow(static_cast<double>(np), -a));
            stack.emplace_back(np, i);
        }
    }
    return s.value();
}

namespace {

// Gauss quadrature of f over [a,b] split additionally at integer kinks.
double quad_with_integer_splits(const std::function<double(double)>& f, double a, double b) {
    if (!(b > a)) return 0.0;
    std::vector<double> cuts{a};
    for (double m = std::floor(a) + 1.0; m < b; m += 1.0)
        if (m > a) cuts.push_back(m);
    cuts.push_back(b);
    double s = 0.0;
    for (std::size_t i = 0; i + 1 < cuts.size(); ++i)
        s += gauss_quad(f, cuts[i], cuts[i + 1], 4);
    return s;
}

}  // namespace

double bracket_constant(const DickmanTable& table, int k, double eps, double delta) {
    if (!(eps > 0.0 && eps < 1.0) || !(delta > 0.0) || k < 0)
        throw std::invalid_argument("bracket_constant: need 0 < eps < 1, delta > 0, k >= 0");
    const double a = eps + k * delta;
    const double v_hi = std::max((1.0 - a) / a, 0.0);
    const double v_lo = std::max((1.0 - a - delta) / a, 0.0);
    if (v_hi <= v_lo) return 0.0;
    // 1/(1 - a v) blows up at v = 1/a; the admissible range stays below it.
    const double cap = 1.0 / a - 1e-12;
    const double hi = std::min(v_hi, cap);
    const auto f = [&](double v) { return table.rho(v) / (1.0 - a * v); };
    return a * quad_with_integer_splits(f, v_lo, hi);
}

double bracket_constant_sum(const DickmanTable& table, double eps, double delta) {
    const int kmax = static_cast<int>(std::floor((1.0 - eps) / delta));
    double s = 0.0;
    for (int k = 0; k <= kmax; ++k) s += bracket_constant(table, k, eps, delta);
    return s;
}

double g_eps_delta(double v, double eps, double delta) {
    if (!(v > 0.0)) throw std::invalid_argument("g_eps_delta: v > 0");
    const int kmax = static_cast<int>(std::floor((1.0 - eps) / delta));
    const double lo = (1.0 - delta) / (v + 1.0), hi = 1.0 / (v + 1.0);
    double s = 0.0;
    for (int k = 0; k <= kmax; ++k) {
        const double a = eps + k * delta;
        if (a > lo && a <= hi) s += a / (1.0 - a * v);
    }
    return s;
}

double equid_integral(double eps, double delta, double a_lim,
                      const std::function<double(double)>& g) {
    if (!(delta > 0.0)) throw std::invalid_argument("equid_integral: delta > 0");
    // The indicator 1{ frac(w(v)) < 1/(v+1) }, w(v) = (1/(v+1) - eps)/delta,
    // switches only where w crosses an integer (v_j = 1/(eps + j delta) - 1)
    // or where frac(w(v)) = 1/(v+1) (v*_j = (1 - delta)/(eps + j delta) - 1).
    std::vector<double> cuts{0.0, a_lim};
    const auto push = [&](double v) {
        if (v > 0.0 && v < a_lim) cuts.push_back(v);
    };
    const double w_hi = (1.0 - eps) / delta;  // w(0)
    for (long j = -2; j <= static_cast<long>(std::ceil(w_hi)) + 2; ++j) {
        const double aj = eps + static_cast<double>(j) * delta;
        if (aj <= 0.0) continue;
        push(1.0 / aj - 1.0);
        push((1.0 - delta) / aj - 1.0);
    }
    std::sort(cuts.begin(), cuts.end());
    cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());

    const auto indicator = [&](double v) {
        const double w = (1.0 / (v + 1.0) - eps) / delta;
        return (w - std::floor(w)) < 1.0 / (v + 1.0) ? 1.0 : 0.0;
    };
    double total = 0.0;
    for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
        const double lo = cuts[i], hi = cuts[i + 1];
        if (!(hi > lo)) continue;
        const double ind = indicator(0.5 * (lo + hi));
        total += gauss_quad([&](double v) { return g(v) * (ind - 1.0 / (v + 1.0)); }, lo, hi, 2);
    }
    return total;
}

double richardson_extrapolate(const std::vector<std::pair<double, double>>& points) {
    const std::size_t n = points.size();
    if (n == 0) throw std::invalid_argument("richardson_extrapolate: empty");
    // Neville's scheme evaluated at h = 0.
    std::vector<double> hs(n), val(n);
    for (std::size_t i = 0; i < n; ++i) {
        hs[i] = points[i].first;
        val[i] = points[i].second;
    }
    for (std::size_t level = 1; level < n; ++level)
        for (std::size_t i = 0; i + level < n; ++i)
            val[i] = (hs[i + level] * val[i] - hs[i] * val[i + 1]) / (hs[i + level] - hs[i]);
    return val[0];
}

}  // namespace rmf
