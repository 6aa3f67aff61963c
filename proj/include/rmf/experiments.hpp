#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "rmf/dickman.hpp"
#include "rmf/euler.hpp"
#include "rmf/primes.hpp"
#include "rmf/sampler.hpp"
#include "rmf/spectral.hpp"
#include "rmf/stats.hpp"
#include "rmf/truncation.hpp"
#include "rmf/util.hpp"

namespace rmf {

// ---------------------------------------------------------------------------
// Ensemble runners. Trials use trial_seed(master_seed, i); per-trial records
// are stored by index and reduced in that order, so aggregates reproduce bit
// for bit under any worker count.
// ---------------------------------------------------------------------------

struct CltEnsembleConfig {
    Model model = Model::steinhaus;
    std::uint64_t seed = 1;
    double x = 1e4;
    double eps = 0.1;
    double delta = 0.05;
    std::size_t trials = 200;
    bool with_bracket = false;
    bool with_vproxy = false;
    double y_ref = 0.0;        // 0: exp((log x)^0.9)
    double vproxy_t_max = 50.0;
};

struct CltEnsemble {
    CltEnsembleConfig config;
    std::vector<std::uint64_t> seeds;
    std::vector<cplx> s_full;
    std::vector<cplx> s_trunc;
    std::vector<double> bracket;  // empty unless requested
    std::vector<double> vproxy;   // empty unless requested

    std::vector<double> abs_trunc() const;
    std::vector<double> re_trunc() const;
};

double default_reference_y(double x);

CltEnsemble run_clt_ensemble(const FactorTable& table, const StepFunction& step,
                             const CltEnsembleConfig& config);

/// Independent V-proxy samples at fixed y (fresh seeds).
std::vector<double> v_proxy_ensemble(Model model, std::uint64_t master_seed,
                                     const FactorTable& table, const StepFunction& step,
                                     double y, std::size_t trials, double t_max = 50.0);

/// sqrt(c_factor * V_i) * G_i with independent complex Gaussians.
std::vector<cplx> gaussian_reference(const std::vector<double>& v_samples, double c_factor,
                                     std::uint64_t seed);

// ---------------------------------------------------------------------------
// moment_trend: E|sum_{n<=x} alpha(n)|^{2q} against (x/(1+(1-q) sqrt(log log x)))^q.
// One multiplicative pass per trial covers every checkpoint.
// ---------------------------------------------------------------------------

struct MomentTrendRow {
    double x = 0;
    double mean = 0;       // estimate of E|S|^{2q}
    double se = 0;
    double predicted = 0;  // Harper envelope
    double ratio = 0;
    std::size_t trials = 0;
};

std::vector<MomentTrendRow> moment_trend(Model model, std::uint64_t master_seed,
                                         const FactorTable& table,
                                         const std::vector<double>& x_checkpoints, double q,
                                         std::size_t trials);

// ---------------------------------------------------------------------------
// limit_distribution_test: two-sample KS between |S| (and Re S) and the
// sqrt(C V) G reference, with bootstrap bands and a self-split null band.
// ---------------------------------------------------------------------------

struct LimitTestResult {
    double ks_abs = 0;
    double ks_re = 0;
    BootstrapKs boot_abs;
    double null_band_scaled = 0;      // 95% self-split band for the scaled statistic
    double ks_abs_scaled = 0;
    double rotation_ks_scaled = 0;    // Re S vs Re e^{i theta} S across half-samples
    double rotation_null_scaled = 0;
    std::size_t n_sample = 0, n_reference = 0;
};

LimitTestResult limit_distribution_test(const std::vector<cplx>& samples,
                                        const std::vector<cplx>& reference,
                                        std::uint64_t seed);

// ---------------------------------------------------------------------------
// stable_convergence_probe: E[Y h(S_x)] vs E[Y h(sqrt(V) G)] where V comes
// from the same trial's phases (the dependence the stable limit keeps) and
// G is fresh. Y defaults to Re alpha(2).
// ---------------------------------------------------------------------------

struct StableProbeRow {
    std::string h_name;
    double lhs = 0, rhs = 0, gap = 0, se = 0;
};

struct StableProbeResult {
    std::vector<StableProbeRow> rows;
    std::size_t trials = 0;
};

StableProbeResult stable_convergence_probe(Model model, std::uint64_t master_seed,
                                           const FactorTable& table, const StepFunction& step,
                                           double x, double y_ref, std::size_t trials,
                                           double vproxy_t_max = 50.0);

// ---------------------------------------------------------------------------
// bracket_convergence_report: KS between T_{x,eps,delta} samples and
// C_{eps,delta} * V-proxy samples per x.
// ---------------------------------------------------------------------------

struct BracketReportRow {
    double x = 0;
    double y_ref = 0;
    double ks = 0;
    double ks_scaled = 0;
    double critical_scaled = 0;  // asymptotic 95% two-sample critical value, scaled
    double c_eps_delta = 0;
    std::size_t trials = 0;
};

std::vector<BracketReportRow> bracket_convergence_report(
    Model model, std::uint64_t master_seed, const FactorTable& table, const StepFunction& step,
    const DickmanTable& dickman, double eps, double delta, const std::vector<double>& xs,
    std::size_t trials, double vproxy_t_max = 50.0);

// ---------------------------------------------------------------------------
// chaining_dominance: the two-distance chaining bound, with scales fitted
// from the coupling's pointwise increments, against the Monte Carlo sup tail
// of the residual field on I^3.
// ---------------------------------------------------------------------------

struct ChainingDominance {
    double gamma1 = 0, gamma2 = 0;
    struct Row {
        double x = 0;
        double empirical_tail = 0;
        double bound = 0;
    };
    std::vector<Row> rows;
    bool dominated = true;
};

ChainingDominance chaining_dominance(Model model, std::uint64_t master_seed,
                                     const FactorTable& table, double y, double u1, double u2,
                                     std::size_t trials);

}  // namespace rmf
