#pragma once

#include <array>
#include <cstdint>
#include <vector>

#include "rmf/util.hpp"

namespace rmf {

/// Bernstein tail 2 exp(-x^2 / (2(v + c x))).
double bernstein_tail(double v, double c, double x);

/// Nested dyadic nets of the cube I^3: |T_0| = |T_1| = 1 and T_n for n >= 2
/// is the cube of 2^{2^{n-2}} equally spaced points of I (endpoints
/// included), so |T_n| <= 2^{2^n} and |T_n|^2 <= |T_{n+1}| hold exactly.
/// pi_n maps to the nearest net point, ties toward the lexicographically
/// smaller coordinate.
class AdmissibleSequence {
public:
    AdmissibleSequence(double lo, double hi, int max_level = 7);

    double lo() const { return lo_; }
    double hi() const { return hi_; }
    int max_level() const { return max_level_; }

    /// Points per axis at level n (1 for n <= 1, 2^{2^{n-2}} above).
    std::uint64_t axis_points(int n) const;

    /// Level-n cardinality |T_n| = axis_points(n)^3.
    double cardinality(int n) const;

    std::array<double, 3> project(const std::array<double, 3>& t, int n) const;

    /// Exact admissibility checks at every level up to max_level.
    bool admissible() const;

private:
    double project_axis(double v, int n) const;
    double lo_, hi_;
    int max_level_;
};

/// gamma_k(T, d) with d = scale * Euclidean, evaluated as a sup over a dense
/// lattice sample of I^3 (samples_per_axis^3 points; a lower bound of the
/// true sup, adequate because pi_n is piecewise constant on dyadic cells).
double gamma_functional(const AdmissibleSequence& seq, double scale, int k,
                        int samples_per_axis = 64);

/// max(5C, e^2) exp(-x^2 / (16 gamma2^2 + 8 gamma1 x)); the degenerate
/// gamma1 = gamma2 = 0 case collapses to max(5C, e^2) at x = 0 and 0 beyond.
double chaining_tail(double gamma1, double gamma2, double c_const, double x);

}  // namespace rmf
