#include "rmf/experiments.hpp"

#include <algorithm>
#include <cmath>

#include "rmf/concentration.hpp"
#include "rmf/coupling.hpp"

namespace rmf {

std::vector<double> CltEnsemble::abs_trunc() const {
    std::vector<double> out(s_trunc.size());
    for (std::size_t i = 0; i < out.size(); ++i) out[i] = std::abs(s_trunc[i]);
    return out;
}

std::vector<double> CltEnsemble::re_trunc() const {
    std::vector<double> out(s_trunc.size());
    for (std::size_t i = 0; i < out.size(); ++i) out[i] = s_trunc[i].real();
    return out;
}

double default_reference_y(double x) { return std::exp(std::pow(std::log(x), 0.9)); }

CltEnsemble run_clt_ensemble(const FactorTable& table, const StepFunction& step,
                             const CltEnsembleConfig& config) {
    CltEnsemble e;
    e.config = config;
    if (e.config.y_ref <= 0.0) e.config.y_ref = default_reference_y(config.x);
    const TruncationPlan plan =
        TruncationPlan::make(config.x, config.eps, config.delta, step.support_bound());
    const std::size_t n = config.trials;
    e.seeds.resize(n);
    e.s_full.resize(n);
    e.s_trunc.resize(n);
    if (config.with_bracket) e.bracket.resize(n);
    if (config.with_vproxy) e.vproxy.resize(n);
    VProxyOptions vopts;
    vopts.t_max = config.vproxy_t_max;
    parallel_for(n, [&](std::size_t i) {
        e.seeds[i] = trial_seed(config.seed, i);
        PhaseAssignment a(config.model, e.seeds[i]);
        const TrialSums sums = trial_sums(a, table, step, plan);
        e.s_full[i] = sums.full;
        e.s_trunc[i] = sums.truncated;
        if (config.with_bracket) e.bracket[i] = bracket_process(a, table, step, plan);
        if (config.with_vproxy)
            e.vproxy[i] = v_infinity_proxy(a, table, step, e.config.y_ref, vopts).value;
    });
    return e;
}

std::vector<double> v_proxy_ensemble(Model model, std::uint64_t master_seed,
                                     const FactorTable& table, const StepFunction& step,
                                     double y, std::size_t trials, double t_max) {
    std::vector<double> out(trials);
    VProxyOptions opts;
    opts.t_max = t_max;
    parallel_for(trials, [&](std::size_t i) {
        PhaseAssignment a(model, trial_seed(master_seed, i));
        out[i] = v_infinity_proxy(a, table, step, y, opts).value;
    });
    return out;
}

std::vector<cplx> gaussian_reference(const std::vector<double>& v_samples, double c_factor,
                                     std::uint64_t seed) {
    std::vector<cplx> out(v_samples.size());
    for (std::size_t i = 0; i < out.size(); ++i) {
        const cplx g = gaussian_complex(prf(seed, i, 11), prf(seed, i, 12));
        out[i] = std::sqrt(std::max(0.0, c_factor * v_samples[i])) * g;
    }
    return out;
}

std::vector<MomentTrendRow> moment_trend(Model model, std::uint64_t master_seed,
                                         const FactorTable& table,
                                         const std::vector<double>& x_checkpoints, double q,
                                         std::size_t trials) {
    if (!(q > 0.0 && q <= 1.0)) throw std::invalid_argument("moment_trend: 0 < q <= 1");
    std::vector<double> xs = x_checkpoints;
    std::sort(xs.begin(), xs.end());
    if (xs.empty() || xs.front() < 3.0) throw std::invalid_argument("moment_trend: x >= 3");
    std::vector<std::uint64_t> cp_n(xs.size());
    for (std::size_t c = 0; c < xs.size(); ++c)
        cp_n[c] = static_cast<std::uint64_t>(std::floor(xs[c]));
    const std::uint64_t x_max = cp_n.back();
    if (x_max > table.limit()) throw capacity_error("moment_trend: table too small");

    std::vector<std::vector<double>> per_x(xs.size(), std::vector<double>(trials));
    parallel_for(trials, [&](std::size_t i) {
        PhaseAssignment a(model, trial_seed(master_seed, i));
        static thread_local std::vector<cplx> alphas;
        alpha_values_into(a, table, x_max, alphas);
        KahanCplx sum;
        std::size_t cp = 0;
        for (std::uint64_t n = 1; n <= x_max; ++n) {
            sum.add(alphas[n]);
            while (cp < xs.size() && n == cp_n[cp]) {
                per_x[cp][i] = std::pow(std::norm(sum.value()), q);
                ++cp;
            }
        }
    });

    std::vector<MomentTrendRow> rows;
    for (std::size_t c = 0; c < xs.size(); ++c) {
        MomentTrendRow r;
        r.x = xs[c];
        const MeanSe ms = mean_se(per_x[c]);
        r.mean = ms.mean;
        r.se = ms.se;
        r.trials = trials;
        const double llx = std::log(std::log(xs[c]));
        r.predicted = std::pow(xs[c] / (1.0 + (1.0 - q) * std::sqrt(llx)), q);
        r.ratio = r.mean / r.predicted;
        rows.push_back(r);
    }
    return rows;
}

LimitTestResult limit_distribution_test(const std::vector<cplx>& samples,
                                        const std::vector<cplx>& reference,
                                        std::uint64_t seed) {
    LimitTestResult out;
    out.n_sample = samples.size();
    out.n_reference = reference.size();
    std::vector<double> sa(samples.size()), sr(samples.size());
    for (std::size_t i = 0; i < samples.size(); ++i) {
        sa[i] = std::abs(samples[i]);
        sr[i] = samples[i].real();
    }
    std::vector<double> ra(reference.size()), rr(reference.size());
    for (std::size_t i = 0; i < reference.size(); ++i) {
        ra[i] = std::abs(reference[i]);
        rr[i] = reference[i].real();
    }
    out.ks_abs = ks_two_sample(sa, ra);
    out.ks_re = ks_two_sample(sr, rr);
    out.ks_abs_scaled = ks_scaled(out.ks_abs, sa.size(), ra.size());
    out.boot_abs = bootstrap_ks(sa, ra, 200, prf(seed, 1, 21));
    out.null_band_scaled = self_split_null_band(sa, 200, prf(seed, 2, 22));

    // rotation invariance: Re S on one half vs Re e^{i theta} S on the other
    const double theta = 2.39996322972865332;  // fixed irrational angle
    const std::size_t half = samples.size() / 2;
    std::vector<double> h1, h2;
    h1.reserve(half);
    h2.reserve(samples.size() - half);
    for (std::size_t i = 0; i < samples.size(); ++i) {
        if (i < half)
            h1.push_back(samples[i].real());
        else
            h2.push_back((std::polar(1.0, theta) * samples[i]).real());
    }
    out.rotation_ks_scaled = ks_scaled(ks_two_sample(h1, h2), h1.size(), h2.size());
    out.rotation_null_scaled = self_split_null_band(sr, 200, prf(seed, 3, 23));
    return out;
}

StableProbeResult stable_convergence_probe(Model model, std::uint64_t master_seed,
                                           const FactorTable& table, const StepFunction& step,
                                           double x, double y_ref, std::size_t trials,
                                           double vproxy_t_max) {
    struct Panel {
        const char* name;
        double (*h)(cplx);
    };
    static const Panel panel[] = {
        {"one", [](cplx) { return 1.0; }},
        {"abs_capped", [](cplx z) { return std::min(std::abs(z), 2.0); }},
        {"cos_re", [](cplx z) { return std::cos(z.real()); }},
        {"gauss_bump", [](cplx z) { return std::exp(-std::norm(z)); }},
    };
    constexpr std::size_t n_h = sizeof(panel) / sizeof(panel[0]);

    std::vector<std::vector<double>> lhs(n_h, std::vector<double>(trials));
    std::vector<std::vector<double>> rhs(n_h, std::vector<double>(trials));
    VProxyOptions vopts;
    vopts.t_max = vproxy_t_max;
    parallel_for(trials, [&](std::size_t i) {
        const std::uint64_t s = trial_seed(master_seed, i);
        PhaseAssignment a(model, s);
        const cplx sx = full_sum(a, table, step, x);
        const double v = v_infinity_proxy(a, table, step, y_ref, vopts).value;
        const cplx g = gaussian_complex(prf(s, 7, 31), prf(s, 7, 32));
        const cplx ref = std::sqrt(std::max(0.0, v)) * g;
        const double yy = a.value(0).real();  // Y = Re alpha(2)
        for (std::size_t h = 0; h < n_h; ++h) {
            lhs[h][i] = yy * panel[h].h(sx);
            rhs[h][i] = yy * panel[h].h(ref);
        }
    });

    StableProbeResult out;
    out.trials = trials;
    for (std::size_t h = 0; h < n_h; ++h) {
        StableProbeRow row;
        row.h_name = panel[h].name;
        const MeanSe ml = mean_se(lhs[h]), mr = mean_se(rhs[h]);
        row.lhs = ml.mean;
        row.rhs = mr.mean;
        row.gap = ml.mean - mr.mean;
        row.se = std::sqrt(ml.se * ml.se + mr.se * mr.se);
        out.rows.push_back(row);
    }
    return out;
}

std::vector<BracketReportRow> bracket_convergence_report(
    Model model, std::uint64_t master_seed, const FactorTable& table, const StepFunction& step,
    const DickmanTable& dickman, double eps, double delta, const std::vector<double>& xs,
    std::size_t trials, double vproxy_t_max) {
    const double c_ed = bracket_constant_sum(dickman, eps, delta);
    std::vector<BracketReportRow> rows;
    for (double x : xs) {
        CltEnsembleConfig cfg;
        cfg.model = model;
        cfg.seed = prf(master_seed, static_cast<std::uint64_t>(x), 41);
        cfg.x = x;
        cfg.eps = eps;
        cfg.delta = delta;
        cfg.trials = trials;
        cfg.with_bracket = true;
        cfg.vproxy_t_max = vproxy_t_max;
        const CltEnsemble e = run_clt_ensemble(table, step, cfg);
        const auto v = v_proxy_ensemble(model, prf(master_seed, static_cast<std::uint64_t>(x), 42),
                                        table, step, e.config.y_ref, trials, vproxy_t_max);
        std::vector<double> scaled(v.size());
        for (std::size_t i = 0; i < v.size(); ++i) scaled[i] = c_ed * v[i];
        BracketReportRow r;
        r.x = x;
        r.y_ref = e.config.y_ref;
        r.c_eps_delta = c_ed;
        r.trials = trials;
        r.ks = ks_two_sample(e.bracket, scaled);
        r.ks_scaled = ks_scaled(r.ks, e.bracket.size(), scaled.size());
        r.critical_scaled = ks_scaled(ks_critical_two_sample(e.bracket.size(), scaled.size()),
                                      e.bracket.size(), scaled.size());
        rows.push_back(r);
    }
    return rows;
}

ChainingDominance chaining_dominance(Model model, std::uint64_t master_seed,
                                     const FactorTable& table, double y, double u1, double u2,
                                     std::size_t trials) {
    const double lo = -0.5, hi = 0.5;
    const AdmissibleSequence seq(lo, hi, 7);

    // two-distance scales fitted from the coupling's pointwise increments:
    // per prime, a Lipschitz scale in (t0, t) from finite differences of
    // delta~ plus the pointwise amplitude times log p (t0 rotation)
    double v_sum = 0.0, c_max = 0.0;
    {
        const double dt = 0.05;
        PhaseAssignment probe(model, prf(master_seed, 0, 333));
        const ResidualFieldSampler base(table, Twist::one, y, u1, u2, 0.0, 0.0);
        const ResidualFieldSampler shift(table, Twist::one, y, u1, u2, dt, 0.0);
        const auto d0 = base.delta_tildes(probe);
        const auto d1 = shift.delta_tildes(probe);
        const auto primes = table.primes();
        for (std::size_t i = 0; i < d0.size(); ++i) {
            const double pd = primes[i];
            double l = 2.0 * std::abs(d1[i] - d0[i]) / std::sqrt(pd) / dt;
            l += 2.0 * std::abs(d0[i]) * std::log(pd) / std::sqrt(pd);
            v_sum += l * l;
            c_max = std::max(c_max, l);
        }
    }
    ChainingDominance out;
    out.gamma1 = gamma_functional(seq, 4.0 * c_max, 1, 24);
    out.gamma2 = gamma_functional(seq, 2.0 * std::sqrt(v_sum), 2, 24);

    std::vector<double> sups(trials);
    {
        std::vector<double> t0_grid;
        for (double v = lo; v <= hi + 1e-9; v += 0.125) t0_grid.push_back(v);
        std::vector<ResidualFieldSampler> samplers;
        for (double t1 : {-0.4, 0.0, 0.4})
            for (double t2 : {-0.4, 0.0, 0.4})
                samplers.emplace_back(table, Twist::one, y, u1, u2, t1, t2);
        parallel_for(trials, [&](std::size_t i) {
            PhaseAssignment a(model, trial_seed(master_seed, i));
            double mx = 0.0;
            for (const auto& s : samplers) mx = std::max(mx, s.sup_abs(a, t0_grid));
            sups[i] = mx;
        });
    }
    for (double q : {0.5, 0.75, 0.9, 0.95}) {
        const double x = quantile_of(sups, q);
        std::size_t exceed = 0;
        for (double s : sups)
            if (2.0 * s > x) ++exceed;
        ChainingDominance::Row row;
        row.x = x;
        row.empirical_tail = static_cast<double>(exceed) / static_cast<double>(trials);
        row.bound = chaining_tail(out.gamma1, out.gamma2, 4.0, x);
        if (row.empirical_tail > row.bound) out.dominated = false;
        out.rows.push_back(row);
    }
    return out;
}

}  // namespace rmf
