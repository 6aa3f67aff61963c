#include "rmf/truncation.hpp"

#include <algorithm>
#include <cmath>

namespace rmf {

TruncationPlan TruncationPlan::make(double x, double eps, double delta, double support_bound) {
    if (!(x >= 3.0)) throw std::invalid_argument("TruncationPlan: x >= 3");
    if (!(eps > 0.0 && eps < 1.0) || !(delta > 0.0))
        throw std::invalid_argument("TruncationPlan: need 0 < eps < 1, delta > 0");
    if (!(support_bound >= 1.0)) throw std::invalid_argument("TruncationPlan: A >= 1");
    TruncationPlan plan;
    plan.x = x;
    plan.eps = eps;
    plan.delta = delta;
    plan.support_bound = support_bound;
    const double ax = support_bound * x;
    plan.cuts.push_back(std::pow(x, eps));
    for (int k = 1;; ++k) {
        const double cut = std::pow(x, eps + k * delta);
        plan.cuts.push_back(cut);
        if (cut >= ax) break;
        if (k > 100000) throw std::invalid_argument("TruncationPlan: delta too small");
    }
    plan.K = static_cast<int>(plan.cuts.size()) - 2;
    plan.cuts.back() = std::max(plan.cuts.back(), ax);
    return plan;
}

int TruncationPlan::interval_of(double p) const {
    if (!(p > cuts.front()) || p > cuts.back())
        throw std::invalid_argument("interval_of: p outside (x_0, x_{K+1}]");
    const auto it = std::lower_bound(cuts.begin(), cuts.end(), p);
    return static_cast<int>(it - cuts.begin()) - 1;
}

Classification classify(const TruncationPlan& plan, const FactorTable& table, std::uint64_t n) {
    Classification c;
    if (n == 1) {
        c.reason = DiscardReason::small_prime;
        return c;
    }
    std::uint64_t top = 1, below = 1;
    int top_exp = 0, below_exp = 0;
    table.factorize(n, [&](std::uint64_t p, int e) {
        below = top;
        below_exp = top_exp;
        top = p;
        top_exp = e;
    });
    c.p = top;
    c.p_exp = top_exp;
    c.q = below;
    c.q_exp = below_exp;
    const double pd = static_cast<double>(top);
    if (pd <= plan.cuts.front()) {
        c.reason = DiscardReason::small_prime;
        return c;
    }
    c.k = plan.interval_of(pd);
    if (top_exp >= 2) {
        c.reason = DiscardReason::repeated_top;
        return c;
    }
    // rule (iii): the second largest prime factor must not exceed x_k
    if (static_cast<double>(below) > plan.cuts[static_cast<std::size_t>(c.k)])
        c.reason = DiscardReason::second_in_same_band;
    return c;
}

bool keep_predicate(const TruncationPlan& plan, const FactorTable& table, std::uint64_t n) {
    const double ax = plan.support_bound * plan.x;
    if (n < 1 || static_cast<double>(n) > ax)
        throw std::out_of_range("keep_predicate: n outside [1, A x]");
    return classify(plan, table, n).reason == DiscardReason::kept;
}

namespace {

std::uint64_t pass_limit(const StepFunction& step, double x, const FactorTable& table) {
    const double ax = step.support_bound() * x;
    if (ax > static_cast<double>(table.limit()))
        throw capacity_error("sum pass: table does not cover A*x");
    return static_cast<std::uint64_t>(ax);
}

}  // namespace

cplx full_sum(const PhaseAssignment& a, const FactorTable& table, const StepFunction& step,
              double x) {
    const std::uint64_t limit = pass_limit(step, x, table);
    const auto alphas = alpha_values_up_to(a, table, limit);
    KahanCplx s;
    for (std::uint64_t n = 1; n <= limit; ++n) {
        const cplx phi = step.eval(static_cast<double>(n) / x);
        if (phi != cplx{0.0, 0.0}) s.add(alphas[n] * phi);
    }
    return s.value() * (std::pow(std::log(std::log(x)), 0.25) / std::sqrt(x));
}

cplx truncated_sum(const PhaseAssignment& a, const FactorTable& table, const StepFunction& step,
                   const TruncationPlan& plan) {
    return trial_sums(a, table, step, plan).truncated;
}

TrialSums trial_sums(const PhaseAssignment& a, const FactorTable& table, const StepFunction& step,
                     const TruncationPlan& plan) {
    const double x = plan.x;
    const std::uint64_t limit = pass_limit(step, x, table);
    const auto alphas = alpha_values_up_to(a, table, limit);
    KahanCplx s_full, s_trunc;
    for (std::uint64_t n = 1; n <= limit; ++n) {
        const cplx phi = step.eval(static_cast<double>(n) / x);
        if (phi == cplx{0.0, 0.0}) continue;
        const cplx term = alphas[n] * phi;
        s_full.add(term);
        if (classify(plan, table, n).reason == DiscardReason::kept) s_trunc.add(term);
    }
    const double norm = plan.loglog_quarter() / std::sqrt(x);
    return {s_full.value() * norm, s_trunc.value() * norm};
}

cplx martingale_increment_z(const PhaseAssignment& a, const FactorTable& table,
                            const StepFunction& step, const TruncationPlan& plan,
                            std::uint64_t p) {
    const double x = plan.x;
    const double ax = plan.support_bound * x;
    if (!(static_cast<double>(p) > plan.cuts.front()))
        throw std::invalid_argument("martingale_increment_z: p must exceed x^eps");
    if (static_cast<double>(p) > ax) return {0.0, 0.0};
    const int k = plan.interval_of(static_cast<double>(p));
    const double y = plan.cuts[static_cast<std::size_t>(k)];
    const auto limit = static_cast<std::uint64_t>(ax / static_cast<double>(p));
    const SmoothList list = SmoothList::build(a, table, y, limit);
    const cplx inner = smooth_step_sum(list, step, p, x);
    const cplx ap = a.value(table.prime_index(p));
    return ap * inner * (plan.loglog_quarter() / std::sqrt(x));
}

namespace {

// Shared loop over k-bands and the primes inside them; fn(k, p, inner_sum)
// receives sum_{P(m)<=x_k} alpha(m) Phi(m p / x).
template <typename Fn>
void for_each_band_prime(const PhaseAssignment& a, const FactorTable& table,
                         const StepFunction& step, const TruncationPlan& plan, Fn&& fn) {
    const double x = plan.x;
    const double ax = plan.support_bound * x;
    const auto primes = table.primes();
    for (int k = 0; k <= plan.K; ++k) {
        const double lo = plan.cuts[static_cast<std::size_t>(k)];
        const double hi = std::min(plan.cuts[static_cast<std::size_t>(k) + 1], ax);
        if (!(hi > lo)) continue;
        const auto limit = static_cast<std::uint64_t>(ax / lo);
        const SmoothList list = SmoothList::build(a, table, lo, limit);
        const auto first = std::upper_bound(primes.begin(), primes.end(), lo);
        for (auto it = first; it != primes.end() && static_cast<double>(*it) <= hi; ++it) {
            const std::uint64_t p = *it;
            fn(k, p, smooth_step_sum(list, step, p, x));
        }
    }
}

}  // namespace

double bracket_process(const PhaseAssignment& a, const FactorTable& table,
                       const StepFunction& step, const TruncationPlan& plan) {
    KahanSum t;
    for_each_band_prime(a, table, step, plan,
                        [&](int, std::uint64_t, cplx inner) { t.add(std::norm(inner)); });
    return std::sqrt(std::log(std::log(plan.x))) / plan.x * t.value();
}

double lindeberg_sum(const PhaseAssignment& a, const FactorTable& table, const StepFunction& step,
                     const TruncationPlan& plan) {
    KahanSum t;
    for_each_band_prime(a, table, step, plan, [&](int, std::uint64_t, cplx inner) {
        const double sq = std::norm(inner);
        t.add(sq * sq);
    });
    const double llx = std::log(std::log(plan.x));
    return llx / (plan.x * plan.x) * t.value();
}

cplx DiscardDiagnostics::reassembled() const {
    KahanCplx s;
    for (std::size_t k = 0; k < b1.size(); ++k) {
        s.add(b1[k]);
        s.add(b2[k]);
    }
    s.add(b3);
    return s.value() * std::pow(std::log(std::log(x)), 0.25);
}

DiscardDiagnostics discard_diagnostics(const PhaseAssignment& a, const FactorTable& table,
                                       const StepFunction& step, const TruncationPlan& plan,
                                       double t_param) {
    const double x = plan.x;
    if (t_param <= 0.0) t_param = std::pow(x, 1.0 / std::log(std::log(x)));
    const std::uint64_t limit = pass_limit(step, x, table);
    const auto alphas = alpha_values_up_to(a, table, limit);

    DiscardDiagnostics d;
    d.t_param = t_param;
    d.x = x;
    d.b1.assign(static_cast<std::size_t>(plan.K) + 1, cplx{0.0, 0.0});
    d.b2.assign(static_cast<std::size_t>(plan.K) + 1, cplx{0.0, 0.0});
    std::vector<KahanCplx> acc1(d.b1.size()), acc2(d.b2.size());
    KahanCplx acc3, acc_eps, acc_epsdelta;

    const double inv_sqrt_x = 1.0 / std::sqrt(x);
    const double pq_cut = x / t_param;
    for (std::uint64_t n = 1; n <= limit; ++n) {
        const cplx phi = step.eval(static_cast<double>(n) / x);
        if (phi == cplx{0.0, 0.0}) continue;
        const Classification c = classify(plan, table, n);
        const cplx term = alphas[n] * phi;
        const bool in_s_eps = c.reason != DiscardReason::small_prime &&
                              c.reason != DiscardReason::repeated_top;
        if (in_s_eps) acc_eps.add(term);
        if (c.reason == DiscardReason::kept) {
            acc_epsdelta.add(term);
            continue;
        }
        if (c.reason != DiscardReason::second_in_same_band) continue;

        const cplx scaled = term * inv_sqrt_x;
        if (c.q_exp >= 2) {
            acc1[static_cast<std::size_t>(c.k)].add(scaled);
        } else if (static_cast<double>(c.p) * static_cast<double>(c.q) <= pq_cut) {
            acc2[static_cast<std::size_t>(c.k)].add(scaled);
        } else {
            acc3.add(scaled);
            // Count n carrying two qualifying (p', q') pairs under the
            // literal pair-enumeration form of b3 (possible only at small x;
            // flagged, never dropped).
            std::vector<std::uint64_t> distinct;
            table.factorize(n, [&](std::uint64_t p, int) { distinct.push_back(p); });
            int pairs = 0;
            for (std::size_t i = 0; i < distinct.size(); ++i)
                for (std::size_t j = i + 1; j < distinct.size(); ++j) {
                    const double qd = static_cast<double>(distinct[i]);
                    const double pd = static_cast<double>(distinct[j]);
                    if (qd <= plan.cuts.front() || pd * qd <= pq_cut) continue;
                    const int kq = plan.interval_of(qd);
                    const int kp = plan.interval_of(pd);
                    if (kq == kp) ++pairs;
                }
            if (pairs >= 2) ++d.multi_pair_count;
        }
    }
    for (std::size_t k = 0; k < d.b1.size(); ++k) {
        d.b1[k] = acc1[k].value();
        d.b2[k] = acc2[k].value();
    }
    d.b3 = acc3.value();
    const double norm = plan.loglog_quarter() * inv_sqrt_x;
    d.s_eps = acc_eps.value() * norm;
    d.s_eps_delta = acc_epsdelta.value() * norm;
    return d;
}

double conditional_second_moment(const PhaseAssignment& a, const FactorTable& table,
                                 const StepFunction& step, double x, double y, double z) {
    if (!(2.0 <= y && y < z)) throw std::invalid_argument("conditional_second_moment: 2 <= y < z");
    const double ax = step.support_bound() * x;
    if (!(z <= ax)) throw std::invalid_argument("conditional_second_moment: z <= A x");
    const std::uint64_t limit = pass_limit(step, x, table);
    const SmoothList list = SmoothList::build(a, table, y, limit);

    // y-rough z-smooth m <= A x via DFS over the primes in (y, z].
    std::vector<std::uint64_t> mids;
    {
        const auto primes = table.primes();
        std::vector<std::uint64_t> ps;
        for (auto it = std::upper_bound(primes.begin(), primes.end(), y);
             it != primes.end() && static_cast<double>(*it) <= z; ++it)
            ps.push_back(*it);
        mids.push_back(1);
        std::vector<std::pair<std::uint64_t, std::size_t>> stack{{1, 0}};
        while (!stack.empty()) {
            auto [m, k] = stack.back();
            stack.pop_back();
            for (std::size_t i = k; i < ps.size(); ++i) {
                const std::uint64_t mp = m * ps[i];
                if (mp / ps[i] != m || mp > limit) break;
                mids.push_back(mp);
                stack.emplace_back(mp, i);
            }
        }
    }
    KahanSum s;
    for (std::uint64_t m : mids) s.add(std::norm(smooth_step_sum(list, step, m, x)));
    return s.value() / x;
}

double r_ab(const PhaseAssignment& a, const FactorTable& table, const StepFunction& step,
            double x, double a_exp, double b_exp) {
    const double lo = std::pow(x, a_exp), hi = std::pow(x, b_exp);
    const double y = lo;
    const double ax = step.support_bound() * x;
    const SmoothList list = SmoothList::build(a, table, y, pass_limit(step, x, table));
    KahanSum s;
    const auto primes = table.primes();
    for (auto it = std::upper_bound(primes.begin(), primes.end(), lo);
         it != primes.end() && static_cast<double>(*it) <= std::min(hi, ax); ++it) {
        const std::uint64_t p = *it;
        // p^{-1} |s_{x/p, y}|^2 = p^{-1} * |inner|^2 * p / x = |inner|^2 / x
        s.add(std::norm(smooth_step_sum(list, step, p, x)) / x);
    }
    return s.value();
}

double r_ab_integral_surrogate(const PhaseAssignment& a, const FactorTable& table,
                               const StepFunction& step, double x, double a_exp, double b_exp) {
    const double t_lo = std::pow(x, a_exp), t_hi = std::pow(x, b_exp);
    const double y = t_lo;
    const SmoothList list = SmoothList::build(a, table, y, pass_limit(step, x, table));
    // sqrt(x/t) s_{x/t, y} = sum_m alpha(m) Phi(m t / x) jumps at t = b_j x / m;
    // |s_{x/t,y}|^2 / (t log t) = |S|^2 / (x log t) between jumps.
    struct Ev {
        double t;
        cplx delta;
    };
    std::vector<Ev> events;
    const auto& b = step.breakpoints();
    const auto& c = step.values();
    for (std::size_t i = 0; i < list.numbers.size(); ++i) {
        const auto m = static_cast<double>(list.numbers[i]);
        const cplx am = list.prefix[i + 1] - list.prefix[i];
        for (std::size_t j = 0; j < c.size(); ++j) {
            const double t = b[j + 1] * x / m;
            // m t / x rises through b_{j+1}: value switches from c_j to
            // c_{j+1} (zero past the support)
            const cplx next = (j + 1 < c.size()) ? c[j + 1] : cplx{0.0, 0.0};
            events.push_back({t, am * (next - c[j])});
        }
    }
    std::sort(events.begin(), events.end(), [](const Ev& u, const Ev& v) { return u.t < v.t; });

    KahanCplx running;
    KahanSum total;
    std::size_t i = 0;
    // state as t -> 0+: every m sits in the first piece
    running.add(c[0] * list.prefix.back());
    while (i < events.size() && events[i].t <= t_lo) running.add(events[i++].delta);
    double t_prev = t_lo;
    while (t_prev < t_hi) {
        double t_next = t_hi;
        if (i < events.size() && events[i].t < t_hi) t_next = events[i].t;
        if (t_next > t_prev) {
            const double s2 = std::norm(running.value()) / x;
            total.add(s2 * gauss_quad([](double t) { return 1.0 / std::log(t); }, t_prev, t_next, 1));
        }
        while (i < events.size() && events[i].t == t_next) running.add(events[i++].delta);
        t_prev = t_next;
    }
    return total.value();
}

}  // namespace rmf
