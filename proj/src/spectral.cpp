#include "rmf/spectral.hpp"

#include <algorithm>
#include <cmath>

#include "rmf/euler.hpp"

namespace rmf {

StepFunction::StepFunction(std::vector<double> breakpoints, std::vector<cplx> values)
    : breaks_(std::move(breakpoints)), values_(std::move(values)) {
    if (breaks_.size() < 2 || values_.size() + 1 != breaks_.size())
        throw std::invalid_argument("StepFunction: need m+1 breakpoints for m values");
    if (breaks_.front() != 0.0)
        throw std::invalid_argument("StepFunction: first breakpoint must be 0");
    for (std::size_t i = 1; i < breaks_.size(); ++i)
        if (!(breaks_[i] > breaks_[i - 1]))
            throw std::invalid_argument("StepFunction: breakpoints must increase");
}

double StepFunction::max_abs() const {
    double m = 0.0;
    for (const cplx& c : values_) m = std::max(m, std::abs(c));
    return m;
}

double StepFunction::l2_norm_sq() const {
    double s = 0.0;
    for (std::size_t j = 0; j < values_.size(); ++j)
        s += std::norm(values_[j]) * (breaks_[j + 1] - breaks_[j]);
    return s;
}

cplx StepFunction::eval(double u) const {
    if (!(u > 0.0) || u > breaks_.back()) return {0.0, 0.0};
    // pieces are (b_{j-1}, b_j]; index of first breakpoint >= u
    const auto it = std::lower_bound(breaks_.begin() + 1, breaks_.end(), u);
    return values_[static_cast<std::size_t>(it - breaks_.begin()) - 1];
}

StepFunction StepFunction::scaled_arg(double lambda) const {
    if (!(lambda > 0.0)) throw std::invalid_argument("scaled_arg: lambda > 0");
    std::vector<double> b = breaks_;
    for (double& x : b) x *= lambda;
    return StepFunction(std::move(b), values_);
}

StepFunction StepFunction::scaled_value(cplx lambda) const {
    std::vector<cplx> v = values_;
    for (cplx& c : v) c *= lambda;
    return StepFunction(breaks_, std::move(v));
}

StepFunction StepFunction::sum(const StepFunction& f, const StepFunction& g) {
    std::vector<double> b;
    b.reserve(f.breaks_.size() + g.breaks_.size());
    std::merge(f.breaks_.begin(), f.breaks_.end(), g.breaks_.begin(), g.breaks_.end(),
               std::back_inserter(b));
    b.erase(std::unique(b.begin(), b.end()), b.end());
    std::vector<cplx> v;
    v.reserve(b.size() - 1);
    for (std::size_t j = 1; j < b.size(); ++j) v.push_back(f.eval(b[j]) + g.eval(b[j]));
    return StepFunction(std::move(b), std::move(v));
}

cplx mellin(const StepFunction& step, cplx s) {
    const auto& b = step.breakpoints();
    const auto& c = step.values();
    const bool tiny = std::abs(s) < 1e-6;
    cplx out{0.0, 0.0};
    for (std::size_t j = 0; j < c.size(); ++j) {
        const double lo = b[j], hi = b[j + 1];
        if (lo == 0.0) {
            if (s == cplx{0.0, 0.0})
                throw std::invalid_argument("mellin: s = 0 with nonzero value at 0+ is singular");
            out += c[j] * std::exp(s * std::log(hi)) / s;
            continue;
        }
        if (tiny) {
            // (hi^s - lo^s)/s = sum_{k>=1} s^{k-1} (log^k hi - log^k lo)/k!
            const double lh = std::log(hi), ll = std::log(lo);
            cplx term{1.0, 0.0};
            cplx acc{0.0, 0.0};
            double ph = lh, pl = ll, fact = 1.0;
            for (int k = 1; k <= 12; ++k) {
                acc += term * ((ph - pl) / fact);
                term *= s;
                ph *= lh;
                pl *= ll;
                fact *= (k + 1);
            }
            out += c[j] * acc;
        } else {
            out += c[j] * (std::exp(s * std::log(hi)) - std::exp(s * std::log(lo))) / s;
        }
    }
    return out;
}

std::vector<std::uint64_t> smooth_numbers(std::span<const std::uint32_t> primes, double y,
                                          std::uint64_t limit) {
    std::vector<std::uint32_t> ps;
    for (std::uint32_t p : primes) {
        if (static_cast<double>(p) > y) break;
        ps.push_back(p);
    }
    std::vector<std::uint64_t> out;
    out.push_back(1);
    // DFS: extend by primes with index >= k to keep products unique.
    std::vector<std::pair<std::uint64_t, std::size_t>> stack{{1, 0}};
    while (!stack.empty()) {
        auto [n, k] = stack.back();
        stack.pop_back();
        for (std::size_t i = k; i < ps.size(); ++i) {
            const std::uint64_t np = n * ps[i];
            if (np > limit || np / ps[i] != n) break;
            out.push_back(np);
            stack.emplace_back(np, i);
        }
    }
    std::sort(out.begin(), out.end());
    return out;
}

SmoothList SmoothList::build(const PhaseAssignment& a, const FactorTable& table, double y,
                             std::uint64_t limit) {
    SmoothList l;
    l.y = y;
    l.numbers = smooth_numbers(table.primes(), y, limit);
    l.reassign(a, table);
    return l;
}

void SmoothList::reassign(const PhaseAssignment& a, const FactorTable& table) {
    prefix.assign(numbers.size() + 1, cplx{0.0, 0.0});
    KahanCplx acc;
    for (std::size_t i = 0; i < numbers.size(); ++i) {
        acc.add(alpha(a, table, numbers[i]));
        prefix[i + 1] = acc.value();
    }
}

cplx smooth_step_sum(const SmoothList& list, const StepFunction& step, std::uint64_t w,
                     double x) {
    // Contribution of piece j is c_j * (prefix over m with b_{j-1} < m*w/x <= b_j).
    const auto& b = step.breakpoints();
    const auto& c = step.values();
    const auto& nums = list.numbers;
    cplx out{0.0, 0.0};
    const auto last_le = [&](double bound) -> std::size_t {
        // count of list entries m with double(m*w)/x <= bound
        return static_cast<std::size_t>(std::partition_point(
                                            nums.begin(), nums.end(),
                                            [&](std::uint64_t m) {
                                                return static_cast<double>(m * w) / x <= bound;
                                            }) -
                                        nums.begin());
    };
    std::size_t lo = last_le(b[0]);  // b_0 = 0: none
    for (std::size_t j = 0; j < c.size(); ++j) {
        const std::size_t hi = last_le(b[j + 1]);
        if (hi > lo) out += c[j] * (list.prefix[hi] - list.prefix[lo]);
        lo = hi;
    }
    return out;
}

cplx smooth_sum_s(const PhaseAssignment& a, const FactorTable& table, const StepFunction& step,
                  double x, double y) {
    if (!(x >= 1.0)) throw std::invalid_argument("smooth_sum_s: x >= 1");
    const double ax = step.support_bound() * x;
    if (ax > static_cast<double>(table.limit()))
        throw capacity_error("smooth_sum_s: table does not cover A*x");
    const SmoothList list = SmoothList::build(a, table, y, static_cast<std::uint64_t>(ax));
    return smooth_sum_s(list, step, x);
}

cplx smooth_sum_s(const SmoothList& list, const StepFunction& step, double x) {
    return smooth_step_sum(list, step, 1, x) / std::sqrt(x);
}

namespace {

// Simpson integral of |A_y(sigma+it) K_Phi(sigma+it)|^2 over [t0, t1].
// Twist-one local factors; per-prime geometric recurrence along the grid.
double integrate_abs2_ak(const AlphaPrimeCache& cache, std::span<const std::uint32_t> primes,
                         double y, const StepFunction& step, double sigma, double t0, double t1,
                         double spacing) {
    std::size_t np = 0;
    while (np < primes.size() && static_cast<double>(primes[np]) <= y) ++np;
    int nint = std::max<int>(2, static_cast<int>(std::llround((t1 - t0) / spacing)));
    if (nint % 2) ++nint;
    const double h = (t1 - t0) / nint;

    std::vector<cplx> z(np), rot(np);
    for (std::size_t i = 0; i < np; ++i) {
        const double lp = std::log(static_cast<double>(primes[i]));
        z[i] = cache.values[i] * std::pow(static_cast<double>(primes[i]), -sigma) *
               std::polar(1.0, -t0 * lp);
        rot[i] = std::polar(1.0, -h * lp);
    }
    KahanSum acc;
    for (int j = 0; j <= nint; ++j) {
        double dens = 1.0;
        for (std::size_t i = 0; i < np; ++i) dens /= std::norm(cplx{1.0, 0.0} - z[i]);
        const double t = t0 + j * h;
        const double f = dens * std::norm(mellin(step, cplx{sigma, t}));
        const double wj = (j == 0 || j == nint) ? 1.0 : ((j % 2) ? 4.0 : 2.0);
        acc.add(wj * f);
        if (j < nint)
            for (std::size_t i = 0; i < np; ++i) z[i] *= rot[i];
    }
    return acc.value() * h / 3.0;
}

struct SweepEvent {
    double t;
    cplx delta;
};

}  // namespace

PlancherelResult plancherel_check(const PhaseAssignment& a, const FactorTable& table,
                                  const StepFunction& step, double y,
                                  const PlancherelOptions& opts) {
    if (opts.r < 0.0) throw std::invalid_argument("plancherel_check: r >= 0 required");
    PlancherelResult res;
    const double r = opts.r;
    const double A = step.support_bound();
    const auto& b = step.breakpoints();
    const auto& c = step.values();

    // Primes <= y with their alpha values (generated directly; the time-side
    // smooth numbers may exceed the factor table's range).
    std::vector<std::uint64_t> ps;
    std::vector<cplx> pa;
    {
        const auto primes = table.primes();
        if (static_cast<double>(table.limit()) < y)
            throw capacity_error("plancherel_check: table must cover y");
        for (std::size_t i = 0; i < primes.size() && static_cast<double>(primes[i]) <= y; ++i) {
            ps.push_back(primes[i]);
            pa.push_back(a.value(i));
        }
    }

    // ---- time side: exact piecewise integral ----
    double t_max = opts.lhs_t_max;
    for (;;) {
        const auto limit = static_cast<std::uint64_t>(A * t_max);
        std::vector<SweepEvent> events;
        // DFS over (n, alpha(n)) pairs of y-smooth numbers <= limit.
        {
            std::vector<std::tuple<std::uint64_t, cplx, std::size_t>> stack{{1, cplx{1.0, 0.0}, 0}};
            const auto emit = [&](std::uint64_t n, cplx an) {
                for (std::size_t j = 0; j < c.size(); ++j) {
                    if (b[j + 1] == 0.0) continue;
                    const double t = static_cast<double>(n) / b[j + 1];
                    if (t > t_max) continue;
                    const cplx next = (j + 1 < c.size()) ? c[j + 1] : cplx{0.0, 0.0};
                    events.push_back({t, an * (c[j] - next)});
                }
            };
            emit(1, cplx{1.0, 0.0});
            while (!stack.empty()) {
                auto [n, an, k] = stack.back();
                stack.pop_back();
                for (std::size_t i = k; i < ps.size(); ++i) {
                    const std::uint64_t npv = n * ps[i];
                    if (npv / ps[i] != n || npv > limit) break;
                    const cplx anp = an * pa[i];
                    emit(npv, anp);
                    stack.emplace_back(npv, anp, i);
                }
            }
        }
        std::sort(events.begin(), events.end(),
                  [](const SweepEvent& u, const SweepEvent& v) { return u.t < v.t; });

        KahanSum integral;
        KahanSum last_octave;
        KahanCplx running;
        const double octave_lo = 0.5 * t_max;
        std::size_t i = 0;
        while (i < events.size()) {
            const double t_here = events[i].t;
            while (i < events.size() && events[i].t == t_here) {
                running.add(events[i].delta);
                ++i;
            }
            const double t_next = (i < events.size()) ? events[i].t : t_max;
            if (t_next <= t_here) continue;
            const double mass = std::norm(running.value()) *
                                (std::pow(t_here, -1.0 - r) - std::pow(t_next, -1.0 - r)) /
                                (1.0 + r);
            integral.add(mass);
            if (t_next > octave_lo)
                last_octave.add(std::norm(running.value()) *
                                (std::pow(std::max(t_here, octave_lo), -1.0 - r) -
                                 std::pow(t_next, -1.0 - r)) /
                                (1.0 + r));
        }
        res.lhs = integral.value();
        res.lhs_tail_estimate = 4.0 * last_octave.value();
        res.lhs_t_used = t_max;
        if (res.lhs_tail_estimate <= 1e-4 * std::abs(res.lhs) || t_max >= opts.lhs_t_cap) break;
        t_max *= 4.0;
    }

    // ---- frequency side ----
    const double sigma = 0.5 + 0.5 * r;
    double sup_a = 1.0;  // deterministic sup_t |A_y(sigma+it)|
    for (std::uint64_t p : ps) sup_a /= 1.0 - std::pow(static_cast<double>(p), -sigma);
    double c_num = 0.0;  // |K(sigma+it)| <= c_num / |sigma+it|
    for (std::size_t j = 0; j < c.size(); ++j)
        c_num += std::abs(c[j]) * (std::pow(b[j + 1], sigma) + std::pow(b[j], sigma));
    const auto tail_bound = [&](double t_cut) {
        return (1.0 / kTwoPi) * sup_a * sup_a * c_num * c_num * 2.0 *
               (kPi / 2.0 - std::atan(t_cut / sigma)) / sigma;
    };

    AlphaPrimeCache cache;
    cache.values = pa;
    const auto spacing_for = [&](double hi) {
        return hi <= 200.0 ? opts.head_spacing : opts.tail_spacing;
    };
    double t_cut = opts.rhs_t0;
    double head = integrate_abs2_ak(cache, table.primes(), y, step, sigma, -t_cut, t_cut,
                                    spacing_for(t_cut));
    while (tail_bound(t_cut) > opts.rhs_rel_tail * std::abs(head) && t_cut < opts.rhs_t_cap) {
        const double next = 2.0 * t_cut;
        const double h = spacing_for(next);
        head += integrate_abs2_ak(cache, table.primes(), y, step, sigma, t_cut, next, h);
        head += integrate_abs2_ak(cache, table.primes(), y, step, sigma, -next, -t_cut, h);
        t_cut = next;
    }
    res.rhs = head / kTwoPi;
    res.rhs_tail_bound = tail_bound(t_cut);
    res.rhs_t_used = t_cut;
    return res;
}

VProxyResult v_infinity_proxy(const PhaseAssignment& a, const FactorTable& table,
                              const StepFunction& step, double y, const VProxyOptions& opts) {
    const ShiftParams params = ShiftParams::make(y, 0.0);
    const double spacing = opts.spacing > 0.0 ? opts.spacing : EulerGrid::default_spacing(y);
    GridOptions gopts;
    gopts.want_log_a = false;
    gopts.want_field = false;
    gopts.want_m_normalizer = false;
    const EulerGrid grid =
        EulerGrid::build(a, table, Twist::one, params, -opts.t_max, opts.t_max, spacing, gopts);

    std::vector<double> v(grid.size());
    for (std::size_t j = 0; j < v.size(); ++j)
        v[j] = std::norm(mellin(step, cplx{0.5, grid.t_at(j)})) * grid.density_ratio()[j];
    VProxyResult out;
    out.t_max = grid.t_hi();
    out.value = params.loglog_factor() * grid_simpson(v, grid.spacing()) / kTwoPi;
    // E m_{y,0}(dt) = sqrt(log log y) dt, so the expected omitted mass is
    // bounded through |K(1/2+it)| <= c_num/|1/2+it|.
    const auto& b = step.breakpoints();
    const auto& c = step.values();
    double c_num = 0.0;
    for (std::size_t j = 0; j < c.size(); ++j)
        c_num += std::abs(c[j]) * (std::pow(b[j + 1], 0.5) + std::pow(b[j], 0.5));
    out.tail_mean_bound = params.loglog_factor() / kTwoPi * c_num * c_num * 2.0 *
                          (kPi / 2.0 - std::atan(out.t_max / 0.5)) / 0.5;
    return out;
}

}  // namespace rmf
