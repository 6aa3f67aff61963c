#include "rmf/sampler.hpp"

#include <cmath>

namespace rmf {

cplx alpha(const PhaseAssignment& a, const FactorTable& table, std::uint64_t n) {
    if (!table.contains(n)) throw std::out_of_range("alpha: n out of table range");
    cplx out{1.0, 0.0};
    table.factorize(n, [&](std::uint64_t p, int e) {
        const cplx ap = a.value(table.prime_index(p));
        cplx pe = ap;
        for (int i = 1; i < e; ++i) pe *= ap;
        out *= pe;
    });
    return out;
}

cplx twisted_alpha(const PhaseAssignment& a, const FactorTable& table, Twist f,
                   std::uint64_t n) {
    if (!table.contains(n)) throw std::out_of_range("twisted_alpha: n out of table range");
    if (f == Twist::one) return alpha(a, table, n);
    cplx out{1.0, 0.0};
    bool squarefull = false;
    int omega = 0;
    table.factorize(n, [&](std::uint64_t p, int e) {
        if (e > 1) squarefull = true;
        ++omega;
        const cplx ap = a.value(table.prime_index(p));
        cplx pe = ap;
        for (int i = 1; i < e; ++i) pe *= ap;
        out *= pe;
    });
    if (squarefull) return {0.0, 0.0};
    if (f == Twist::moebius && (omega & 1)) return -out;
    return out;
}

AlphaPrimeCache AlphaPrimeCache::build(const PhaseAssignment& a, const FactorTable& table,
                                       std::uint64_t prime_limit) {
    AlphaPrimeCache c;
    const auto primes = table.primes();
    std::size_t count = 0;
    while (count < primes.size() && primes[count] <= prime_limit) ++count;
    c.values.resize(count);
    for (std::size_t i = 0; i < count; ++i) c.values[i] = a.value(i);
    return c;
}

std::vector<cplx> alpha_values_up_to(const PhaseAssignment& a, const FactorTable& table,
                                     std::uint64_t limit) {
    std::vector<cplx> vals;
    alpha_values_into(a, table, limit, vals);
    return vals;
}

void alpha_values_into(const PhaseAssignment& a, const FactorTable& table, std::uint64_t limit,
                       std::vector<cplx>& vals) {
    if (limit > table.limit()) throw std::out_of_range("alpha_values_up_to: beyond table");
    vals.resize(limit + 1);
    vals[0] = {0.0, 0.0};
    if (limit >= 1) vals[1] = {1.0, 0.0};
    std::size_t prime_idx = 0;
    for (std::uint64_t n = 2; n <= limit; ++n) {
        const std::uint64_t p = table.spf(n);
        if (p == n) {
            // primes appear in increasing order, so the running index matches
            vals[n] = a.value(prime_idx++);
        } else {
            vals[n] = vals[p] * vals[n / p];
        }
    }
}

McComplexEstimate orthogonality_mc(Model model, std::uint64_t master_seed,
                                   const FactorTable& table, std::uint64_t n,
                                   std::uint64_t m, std::size_t trials) {
    if (trials < 1) throw std::invalid_argument("orthogonality_mc: trials >= 1");
    std::vector<double> re(trials), im(trials);
    parallel_for(trials, [&](std::size_t i) {
        PhaseAssignment a(model, trial_seed(master_seed, i));
        const cplx z = alpha(a, table, n) * std::conj(alpha(a, table, m));
        re[i] = z.real();
        im[i] = z.imag();
    });
    const MeanSe mr = mean_se(re), mi = mean_se(im);
    McComplexEstimate est;
    est.mean = {mr.mean, mi.mean};
    est.se = std::sqrt(mr.se * mr.se + mi.se * mi.se);
    est.trials = trials;
    return est;
}

}  // namespace rmf
