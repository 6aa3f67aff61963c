#pragma once

#include <cstdint>
#include <functional>
#include <vector>

#include "rmf/util.hpp"

namespace rmf {

/// Two-sample Kolmogorov-Smirnov statistic sup |F_a - F_b|.
double ks_two_sample(std::vector<double> a, std::vector<double> b);

/// One-sample statistic against a CDF.
double ks_one_sample(std::vector<double> samples, const std::function<double(double)>& cdf);

/// Asymptotic two-sample critical value c(alpha) sqrt((n+m)/(nm)),
/// c(alpha) = sqrt(-ln(alpha/2)/2).
double ks_critical_two_sample(std::size_t n, std::size_t m, double alpha = 0.05);

/// sqrt(nm/(n+m)) * D: the scale-free KS statistic.
double ks_scaled(double d, std::size_t n, std::size_t m);

struct BootstrapKs {
    double d = 0.0;       // observed statistic
    double se = 0.0;      // bootstrap standard error
    double lo = 0.0;      // 2.5% quantile of the bootstrap distribution
    double hi = 0.0;      // 97.5% quantile
};

/// Case-resampling bootstrap of the two-sample KS statistic.
BootstrapKs bootstrap_ks(const std::vector<double>& a, const std::vector<double>& b,
                         std::size_t replicates, std::uint64_t seed);

/// Self-split null band: repeatedly split xs at random into halves and take
/// the given quantile of the scaled KS statistics between the halves.
double self_split_null_band(const std::vector<double>& xs, std::size_t replicates,
                            std::uint64_t seed, double quantile = 0.95);

double quantile_of(std::vector<double> xs, double q);

}  // namespace rmf
