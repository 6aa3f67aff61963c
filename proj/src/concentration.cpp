#include "rmf/concentration.hpp"

#include <cmath>

namespace rmf {

double bernstein_tail(double v, double c, double x) {
    if (!(v > 0.0) || !(c > 0.0)) throw std::invalid_argument("bernstein_tail: v, c > 0");
    if (!(x >= 0.0)) throw std::invalid_argument("bernstein_tail: x >= 0");
    return 2.0 * std::exp(-x * x / (2.0 * (v + c * x)));
}

AdmissibleSequence::AdmissibleSequence(double lo, double hi, int max_level)
    : lo_(lo), hi_(hi), max_level_(max_level) {
    if (!(hi > lo)) throw std::invalid_argument("AdmissibleSequence: empty interval");
    if (max_level < 2 || max_level > 7)  // level 8 would need 2^64 points per axis
        throw std::invalid_argument("AdmissibleSequence: max_level in [2, 7]");
}

std::uint64_t AdmissibleSequence::axis_points(int n) const {
    if (n <= 1) return 1;
    return std::uint64_t{1} << (std::uint64_t{1} << (n - 2));
}

double AdmissibleSequence::cardinality(int n) const {
    if (n <= 1) return 1.0;
    return std::pow(2.0, 3.0 * std::pow(2.0, n - 2));
}

double AdmissibleSequence::project_axis(double v, int n) const {
    const std::uint64_t pts = axis_points(n);
    if (pts == 1) return lo_;  // the singleton sits at the lexicographically smallest point
    const double spacing = (hi_ - lo_) / static_cast<double>(pts - 1);
    // nearest grid point; exact ties resolve to the smaller index
    double rel = (v - lo_) / spacing;
    auto idx = static_cast<std::int64_t>(std::floor(rel + 0.5));
    if (rel + 0.5 == std::floor(rel + 0.5)) --idx;  // tie: round down
    idx = std::clamp<std::int64_t>(idx, 0, static_cast<std::int64_t>(pts) - 1);
    return lo_ + spacing * static_cast<double>(idx);
}

std::array<double, 3> AdmissibleSequence::project(const std::array<double, 3>& t, int n) const {
    return {project_axis(t[0], n), project_axis(t[1], n), project_axis(t[2], n)};
}

bool AdmissibleSequence::admissible() const {
    for (int n = 0; n <= max_level_; ++n) {
        const double cn = cardinality(n);
        if (n == 0 && cn != 1.0) return false;
        if (cn > std::pow(2.0, std::pow(2.0, n))) return false;
        if (n + 1 <= max_level_ && cn * cn > cardinality(n + 1)) return false;
    }
    return true;
}

double gamma_functional(const AdmissibleSequence& seq, double scale, int k,
                        int samples_per_axis) {
    if (k != 1 && k != 2) throw std::invalid_argument("gamma_functional: k in {1,2}");
    if (samples_per_axis < 2) throw std::invalid_argument("gamma_functional: need >= 2 samples");
    const double lo = seq.lo(), hi = seq.hi();
    const double step = (hi - lo) / (samples_per_axis - 1);
    double best = 0.0;
    std::array<double, 3> t{};
    for (int i = 0; i < samples_per_axis; ++i) {
        t[0] = lo + i * step;
        for (int j = 0; j < samples_per_axis; ++j) {
            t[1] = lo + j * step;
            for (int l = 0; l < samples_per_axis; ++l) {
                t[2] = lo + l * step;
                double sum = 0.0;
                auto prev = seq.project(t, 0);
                for (int n = 1; n <= seq.max_level(); ++n) {
                    const auto cur = seq.project(t, n);
                    const double dx = cur[0] - prev[0], dy = cur[1] - prev[1],
                                 dz = cur[2] - prev[2];
                    const double d = scale * std::sqrt(dx * dx + dy * dy + dz * dz);
                    sum += std::pow(2.0, static_cast<double>(n) / k) * d;
                    prev = cur;
                }
                best = std::max(best, sum);
            }
        }
    }
    return best;
}

double chaining_tail(double gamma1, double gamma2, double c_const, double x) {
    if (gamma1 < 0.0 || gamma2 < 0.0 || c_const < 0.0 || x < 0.0)
        throw std::invalid_argument("chaining_tail: nonnegative inputs required");
    const double front = std::max(5.0 * c_const, std::exp(2.0));
    const double denom = 16.0 * gamma2 * gamma2 + 8.0 * gamma1 * x;
    if (denom == 0.0) return x == 0.0 ? front : 0.0;
    return front * std::exp(-x * x / denom);
}

}  // namespace rmf
