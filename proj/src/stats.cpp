#include "rmf/stats.hpp"

#include <algorithm>
#include <cmath>

namespace rmf {

double ks_two_sample(std::vector<double> a, std::vector<double> b) {
    if (a.empty() || b.empty()) throw std::invalid_argument("ks_two_sample: empty sample");
    std::sort(a.begin(), a.end());
    std::sort(b.begin(), b.end());
    const double na = static_cast<double>(a.size()), nb = static_cast<double>(b.size());
    std::size_t i = 0, j = 0;
    double d = 0.0;
    while (i < a.size() && j < b.size()) {
        const double v = std::min(a[i], b[j]);
        while (i < a.size() && a[i] <= v) ++i;
        while (j < b.size() && b[j] <= v) ++j;
        d = std::max(d, std::abs(static_cast<double>(i) / na - static_cast<double>(j) / nb));
    }
    return d;
}

double ks_one_sample(std::vector<double> samples, const std::function<double(double)>& cdf) {
    if (samples.empty()) throw std::invalid_argument("ks_one_sample: empty sample");
    std::sort(samples.begin(), samples.end());
    const double n = static_cast<double>(samples.size());
    double d = 0.0;
    for (std::size_t i = 0; i < samples.size(); ++i) {
        const double f = cdf(samples[i]);
        d = std::max(d, std::max(static_cast<double>(i + 1) / n - f,
                                 f - static_cast<double>(i) / n));
    }
    return d;
}

double ks_critical_two_sample(std::size_t n, std::size_t m, double alpha) {
    const double c = std::sqrt(-std::log(alpha / 2.0) / 2.0);
    return c * std::sqrt(static_cast<double>(n + m) /
                         (static_cast<double>(n) * static_cast<double>(m)));
}

double ks_scaled(double d, std::size_t n, std::size_t m) {
    return d * std::sqrt(static_cast<double>(n) * static_cast<double>(m) /
                         static_cast<double>(n + m));
}

double quantile_of(std::vector<double> xs, double q) {
    if (xs.empty()) throw std::invalid_argument("quantile_of: empty");
    std::sort(xs.begin(), xs.end());
    const double pos = q * static_cast<double>(xs.size() - 1);
    const auto lo = static_cast<std::size_t>(std::floor(pos));
    const auto hi = std::min(lo + 1, xs.size() - 1);
    const double w = pos - static_cast<double>(lo);
    return xs[lo] * (1.0 - w) + xs[hi] * w;
}

BootstrapKs bootstrap_ks(const std::vector<double>& a, const std::vector<double>& b,
                         std::size_t replicates, std::uint64_t seed) {
    BootstrapKs out;
    out.d = ks_two_sample(a, b);
    if (replicates == 0) return out;
    std::vector<double> ds(replicates);
    parallel_for(replicates, [&](std::size_t r) {
        const std::uint64_t s = prf(seed, r, 0x626f6f74ULL);
        std::vector<double> ra(a.size()), rb(b.size());
        for (std::size_t i = 0; i < a.size(); ++i)
            ra[i] = a[prf(s, i, 1) % a.size()];
        for (std::size_t i = 0; i < b.size(); ++i)
            rb[i] = b[prf(s, i, 2) % b.size()];
        ds[r] = ks_two_sample(std::move(ra), std::move(rb));
    });
    const MeanSe ms = mean_se(ds);
    out.se = ms.se * std::sqrt(static_cast<double>(replicates));  // sd of the bootstrap law
    out.lo = quantile_of(ds, 0.025);
    out.hi = quantile_of(ds, 0.975);
    return out;
}

double self_split_null_band(const std::vector<double>& xs, std::size_t replicates,
                            std::uint64_t seed, double quantile) {
    if (xs.size() < 4) throw std::invalid_argument("self_split_null_band: sample too small");
    std::vector<double> stats(replicates);
    parallel_for(replicates, [&](std::size_t r) {
        const std::uint64_t s = prf(seed, r, 0x73706c6974ULL);
        std::vector<double> shuffled = xs;
        // Fisher-Yates with PRF draws
        for (std::size_t i = shuffled.size() - 1; i > 0; --i)
            std::swap(shuffled[i], shuffled[prf(s, i, 3) % (i + 1)]);
        const std::size_t half = shuffled.size() / 2;
        std::vector<double> a(shuffled.begin(), shuffled.begin() + half);
        std::vector<double> b(shuffled.begin() + half, shuffled.end());
        stats[r] = ks_scaled(ks_two_sample(std::move(a), std::move(b)), half,
                             xs.size() - half);
    });
    return quantile_of(stats, quantile);
}

}  // namespace rmf
