#pragma once

#include <cstdint>
#include <vector>

#include "rmf/primes.hpp"
#include "rmf/sampler.hpp"
#include "rmf/spectral.hpp"
#include "rmf/util.hpp"

namespace rmf {

/// Cut-point grid x_k = x^{eps + k delta}, k = 0..K+1, with K minimal such
/// that x_{K+1} >= A x (the last cut is clamped up to A x to close the
/// floating-point gap). For large x and A > 1, K = floor((1-eps)/delta).
struct TruncationPlan {
    double x = 0, eps = 0, delta = 0, support_bound = 1;
    int K = 0;
    std::vector<double> cuts;  // size K + 2

    static TruncationPlan make(double x, double eps, double delta, double support_bound);

    double x0() const { return cuts.front(); }
    double x_top() const { return cuts.back(); }
    /// k with p in (x_k, x_{k+1}]; requires x_0 < p <= x_{K+1}.
    int interval_of(double p) const;
    double loglog_quarter() const { return std::pow(std::log(std::log(x)), 0.25); }
};

enum class DiscardReason : std::uint8_t {
    kept = 0,
    small_prime,          // (i)  P(n) <= x^eps
    repeated_top,         // (ii) P(n)^2 | n
    second_in_same_band,  // (iii) P(n/P(n)) in the same I_k as P(n)
};

struct Classification {
    DiscardReason reason = DiscardReason::kept;
    int k = -1;              // interval of P(n) when P(n) > x_0
    std::uint64_t p = 1;     // largest prime factor
    int p_exp = 0;
    std::uint64_t q = 1;     // largest distinct prime below p (1 if none)
    int q_exp = 0;
};

Classification classify(const TruncationPlan& plan, const FactorTable& table, std::uint64_t n);
bool keep_predicate(const TruncationPlan& plan, const FactorTable& table, std::uint64_t n);

/// S^Phi_x = (log log x)^{1/4} x^{-1/2} sum_n alpha(n) Phi(n/x).
cplx full_sum(const PhaseAssignment& a, const FactorTable& table, const StepFunction& step,
              double x);

/// The truncated sum S^Phi_{x,eps,delta} (keep_predicate filter, same
/// normalization).
cplx truncated_sum(const PhaseAssignment& a, const FactorTable& table, const StepFunction& step,
                   const TruncationPlan& plan);

/// Both sums in one factorization pass (ensemble fast path).
struct TrialSums {
    cplx full;
    cplx truncated;
};
TrialSums trial_sums(const PhaseAssignment& a, const FactorTable& table, const StepFunction& step,
                     const TruncationPlan& plan);

/// Z'_{x,p}: the martingale increment at prime p (0 for p > A x).
cplx martingale_increment_z(const PhaseAssignment& a, const FactorTable& table,
                            const StepFunction& step, const TruncationPlan& plan,
                            std::uint64_t p);

/// T_{x,eps,delta} = sqrt(log log x)/x sum_k sum_{p in I_k}
///   | sum_{P(m) <= x_k} alpha(m) Phi(m p / x) |^2.
double bracket_process(const PhaseAssignment& a, const FactorTable& table,
                       const StepFunction& step, const TruncationPlan& plan);

/// Per-trial sum over p > x^eps of |Z'_{x,p}|^4 (Monte Carlo averages of it
/// estimate the Lindeberg quantity).
double lindeberg_sum(const PhaseAssignment& a, const FactorTable& table, const StepFunction& step,
                     const TruncationPlan& plan);

/// The three-way split of the discarded mass behind
/// S_{x,eps} - S_{x,eps,delta} = (log log x)^{1/4} (sum_k (b_{k,1} + b_{k,2}) + b_3).
struct DiscardDiagnostics {
    std::vector<cplx> b1;          // per k
    std::vector<cplx> b2;          // per k
    cplx b3;
    double t_param = 0;
    double x = 0;
    cplx s_eps;                    // S_{x,eps}
    cplx s_eps_delta;              // S_{x,eps,delta}
    std::uint64_t multi_pair_count = 0;  // n with two qualifying (p,q) pairs (flagged, kept once)

    cplx reassembled() const;      // (log log x)^{1/4} (sum (b1+b2) + b3)
    cplx difference() const { return s_eps - s_eps_delta; }
};

/// t_param <= 0 selects the default T(x) = x^{1/log log x}.
DiscardDiagnostics discard_diagnostics(const PhaseAssignment& a, const FactorTable& table,
                                       const StepFunction& step, const TruncationPlan& plan,
                                       double t_param = 0.0);

/// E[|s_{x,z}|^2 | F_y] = sum over y-rough z-smooth m <= A x of
/// m^{-1} |s_{x/m, y}|^2, exactly, for the realization's small-prime values.
double conditional_second_moment(const PhaseAssignment& a, const FactorTable& table,
                                 const StepFunction& step, double x, double y, double z);

/// R_{a,b} = sum_{p in (x^a, x^b]} p^{-1} |s_{x/p, x^a}|^2 and its integral
/// surrogate int_{x^a}^{x^b} |s_{x/t, x^a}|^2 dt/(t log t) (piecewise exact
/// in s, per-segment Gauss in 1/log t).
double r_ab(const PhaseAssignment& a, const FactorTable& table, const StepFunction& step,
            double x, double a_exp, double b_exp);
double r_ab_integral_surrogate(const PhaseAssignment& a, const FactorTable& table,
                               const StepFunction& step, double x, double a_exp, double b_exp);

}  // namespace rmf
