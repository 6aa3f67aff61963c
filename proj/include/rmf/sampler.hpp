#pragma once

#include <complex>
#include <cstdint>
#include <vector>

#include "rmf/primes.hpp"
#include "rmf/util.hpp"

namespace rmf {

enum class Model { steinhaus, gaussian_analog };
enum class Twist { one, moebius, moebius_squared };

/// f(p) on primes for the supported twists (mu(p) = -1, mu^2(p) = 1).
inline double twist_on_prime(Twist f) { return f == Twist::moebius ? -1.0 : 1.0; }

/// Seeded source of the prime values of a random multiplicative function.
///
/// Values are generated lazily through a counter-mode PRF of
/// (seed, prime index), so any alpha(p) can be queried out of order, two runs
/// with the same seed agree bit for bit, and filtration experiments
/// ("primes below p fixed, later primes resampled") are a seed splice away.
class PhaseAssignment {
public:
    PhaseAssignment(Model model, std::uint64_t seed) : model_(model), seed_(seed) {}

    Model model() const { return model_; }
    std::uint64_t seed() const { return seed_; }

    /// Steinhaus phase phi(p) in [0,1) for the prime with this index.
    double phase(std::size_t prime_index) const {
        return u01(prf(seed_, prime_index, 0));
    }

    /// alpha(p) for the prime with this index.
    cplx value(std::size_t prime_index) const {
        if (model_ == Model::steinhaus) {
            const double phi = phase(prime_index);
            return {std::cos(kTwoPi * phi), std::sin(kTwoPi * phi)};
        }
        return gaussian_complex(prf(seed_, prime_index, 1), prf(seed_, prime_index, 2));
    }

    cplx value_at_prime(const FactorTable& table, std::uint64_t p) const {
        return value(table.prime_index(p));
    }

private:
    Model model_;
    std::uint64_t seed_;
};

/// Completely multiplicative extension; alpha(1) = 1.
cplx alpha(const PhaseAssignment& a, const FactorTable& table, std::uint64_t n);

/// f(n) * alpha(n) with f evaluated from the factorisation (mu(n) = 0 on
/// squarefull n).
cplx twisted_alpha(const PhaseAssignment& a, const FactorTable& table, Twist f,
                   std::uint64_t n);

/// Per-realization cache of alpha at every prime index below a limit.
struct AlphaPrimeCache {
    std::vector<cplx> values;  // indexed by prime index

    static AlphaPrimeCache build(const PhaseAssignment& a, const FactorTable& table,
                                 std::uint64_t prime_limit);
};

/// alpha(n) for all n <= limit in one multiplicative pass (16 bytes per
/// entry; a 1e7 pass costs 160 MB). The buffer overload reuses caller
/// storage across trials.
std::vector<cplx> alpha_values_up_to(const PhaseAssignment& a, const FactorTable& table,
                                     std::uint64_t limit);
void alpha_values_into(const PhaseAssignment& a, const FactorTable& table, std::uint64_t limit,
                       std::vector<cplx>& vals);

struct McComplexEstimate {
    cplx mean;
    double se = 0.0;  // standard error of |deviation| per component, pooled
    std::size_t trials = 0;
};

/// Monte Carlo estimate of E[alpha(n) conj(alpha(m))] over fresh assignments
/// seeded from master_seed.
McComplexEstimate orthogonality_mc(Model model, std::uint64_t master_seed,
                                   const FactorTable& table, std::uint64_t n,
                                   std::uint64_t m, std::size_t trials);

}  // namespace rmf
