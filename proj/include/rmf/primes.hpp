#pragma once

#include <cstdint>
#include <functional>
#include <span>
#include <stdexcept>
#include <vector>

namespace rmf {

struct capacity_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Smallest-prime-factor table for 2..limit plus the ordered prime list.
///
/// Factorisation queries walk the spf chain in O(log n). Construction uses a
/// linear sieve up to 1e7 and a segmented spf fill above that, so auxiliary
/// memory stays bounded; the table itself costs 4 bytes per entry. The
/// documented capacity limit is 2^31-1 entries (8 GiB of spf data; a 1e8
/// table, the design target, takes 400 MB).
class FactorTable {
public:
    static constexpr std::uint64_t kMaxLimit = 0x7fffffffULL;

    static FactorTable build(std::uint64_t limit);

    std::uint64_t limit() const { return limit_; }
    std::span<const std::uint32_t> primes() const { return primes_; }

    bool contains(std::uint64_t n) const { return n >= 1 && n <= limit_; }

    std::uint32_t spf(std::uint64_t n) const {
        check_range(n, 2);
        return spf_[n];
    }

    bool is_prime(std::uint64_t n) const { return n >= 2 && n <= limit_ && spf_[n] == n; }

    /// Largest prime factor, with P(1) = 1.
    std::uint64_t largest_prime_factor(std::uint64_t n) const;

    /// P(n / P(n)); equals 1 when n is prime, equals P(n) when P(n)^2 | n.
    std::uint64_t second_largest_prime_factor(std::uint64_t n) const;

    /// Ascending (prime, exponent) visits.
    template <typename Fn>  // Fn(std::uint64_t p, int e)
    void factorize(std::uint64_t n, Fn&& fn) const {
        check_range(n, 1);
        while (n > 1) {
            const std::uint64_t p = spf_[n];
            int e = 0;
            do {
                n /= p;
                ++e;
            } while (n > 1 && spf_[n] == p);
            fn(p, e);
        }
    }

    /// Index of prime p in primes() (p must be prime and within the table).
    std::size_t prime_index(std::uint64_t p) const;

    /// Exact sum over primes p <= x of 1/p.
    double mertens_prime_sum(double x) const;

    /// Psi(x, y): count of y-smooth n <= x.
    std::uint64_t count_smooth(double x, double y) const;

    /// Count of m in [lo, hi] that are y-rough and z-smooth (m = 1 qualifies
    /// when in range: roughness is vacuous for it).
    std::uint64_t count_rough_smooth_interval(double lo, double hi, double y, double z) const;

    bool is_smooth(std::uint64_t n, double y) const;
    bool is_rough(std::uint64_t n, double y) const;

private:
    void check_range(std::uint64_t n, std::uint64_t lo) const {
        if (n < lo || n > limit_) throw std::out_of_range("FactorTable: n out of range");
    }

    std::uint64_t limit_ = 0;
    std::vector<std::uint32_t> spf_;
    std::vector<std::uint32_t> primes_;
};

/// Streamed segmented sieve: calls fn(p) for each prime in [lo, hi] in order.
/// Usable far beyond FactorTable capacity (memory O(sqrt(hi) + segment)).
void for_each_prime(std::uint64_t lo, std::uint64_t hi,
                    const std::function<void(std::uint64_t)>& fn);

}  // namespace rmf
