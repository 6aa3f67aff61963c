#include "rmf/primes.hpp"

#include <algorithm>
#include <cmath>

#include "rmf/util.hpp"

namespace rmf {

namespace {

constexpr std::uint64_t kLinearSieveCap = 10'000'000;  // linear sieve below, segmented above
constexpr std::uint64_t kSegmentLen = 1 << 20;

}  // namespace

FactorTable FactorTable::build(std::uint64_t limit) {
    if (limit < 2) throw std::invalid_argument("FactorTable: limit must be >= 2");
    if (limit > kMaxLimit)
        throw capacity_error("FactorTable: limit exceeds 2^31-1 capacity");

    FactorTable t;
    t.limit_ = limit;
    try {
        t.spf_.assign(limit + 1, 0);
    } catch (const std::bad_alloc&) {
        throw capacity_error("FactorTable: spf allocation failed");
    }

    const std::uint64_t head = std::min(limit, kLinearSieveCap);

    // Linear sieve on [2, head]: each composite is crossed once via its spf.
    for (std::uint64_t n = 2; n <= head; ++n) {
        if (t.spf_[n] == 0) {
            t.spf_[n] = static_cast<std::uint32_t>(n);
            t.primes_.push_back(static_cast<std::uint32_t>(n));
        }
        for (std::uint32_t p : t.primes_) {
            if (p > t.spf_[n]) break;
            const std::uint64_t np = n * p;
            if (np > head) break;
            t.spf_[np] = p;
        }
    }

    if (limit > head) {
        // Segmented fill: mark spf by ascending base primes <= sqrt(limit),
        // then any entry still unmarked is prime.
        const auto root = static_cast<std::uint64_t>(std::sqrt(static_cast<double>(limit))) + 1;
        std::vector<std::uint32_t> base;
        for (std::uint32_t p : t.primes_) {
            if (p > root) break;
            base.push_back(p);
        }
        for (std::uint64_t lo = head + 1; lo <= limit; lo += kSegmentLen) {
            const std::uint64_t hi = std::min(limit, lo + kSegmentLen - 1);
            for (std::uint32_t p : base) {
                std::uint64_t start = ((lo + p - 1) / p) * p;
                if (start < static_cast<std::uint64_t>(p) * p) start = static_cast<std::uint64_t>(p) * p;
                for (std::uint64_t m = start; m <= hi; m += p)
                    if (t.spf_[m] == 0) t.spf_[m] = p;
            }
            for (std::uint64_t n = lo; n <= hi; ++n)
                if (t.spf_[n] == 0) {
                    t.spf_[n] = static_cast<std::uint32_t>(n);
                    t.primes_.push_back(static_cast<std::uint32_t>(n));
                }
        }
    }
    return t;
}

std::uint64_t FactorTable::largest_prime_factor(std::uint64_t n) const {
    check_range(n, 1);
    if (n == 1) return 1;
    std::uint64_t last = 1;
    while (n > 1) {
        last = spf_[n];
        n /= last;
    }
    return last;
}

std::uint64_t FactorTable::second_largest_prime_factor(std::uint64_t n) const {
    check_range(n, 2);
    // Walk the ascending spf chain tracking the top prime, its exponent and
    // the distinct prime just below it; P(n/P(n)) falls out directly.
    std::uint64_t top = 1, below = 1;
    int top_exp = 0;
    std::uint64_t m = n;
    while (m > 1) {
        const std::uint64_t p = spf_[m];
        int e = 0;
        do {
            m /= p;
            ++e;
        } while (m > 1 && spf_[m] == p);
        below = top;
        top = p;
        top_exp = e;
    }
    if (top_exp >= 2) return top;
    return below;
}

std::size_t FactorTable::prime_index(std::uint64_t p) const {
    const auto it = std::lower_bound(primes_.begin(), primes_.end(), p);
    if (it == primes_.end() || *it != p)
        throw std::invalid_argument("prime_index: not a prime in table");
    return static_cast<std::size_t>(it - primes_.begin());
}

double FactorTable::mertens_prime_sum(double x) const {
    if (x < 2.0) throw std::invalid_argument("mertens_prime_sum: x must be >= 2");
    if (x > static_cast<double>(limit_)) throw std::out_of_range("mertens_prime_sum: x beyond table");
    KahanSum s;
    for (std::uint32_t p : primes_) {
        if (static_cast<double>(p) > x) break;
        s.add(1.0 / static_cast<double>(p));
    }
    return s.value();
}

bool FactorTable::is_smooth(std::uint64_t n, double y) const {
    check_range(n, 1);
    while (n > 1) {
        const std::uint64_t p = spf_[n];
        if (static_cast<double>(p) > y) return false;
        do n /= p;
        while (n > 1 && spf_[n] == p);
    }
    return true;
}

bool FactorTable::is_rough(std::uint64_t n, double y) const {
    check_range(n, 1);
    if (n == 1) return true;
    return static_cast<double>(spf_[n]) > y;
}

std::uint64_t FactorTable::count_smooth(double x, double y) const {
    if (x < 1.0) return 0;
    const auto nx = static_cast<std::uint64_t>(std::floor(x));
    if (nx > limit_) throw std::out_of_range("count_smooth: x beyond table");
    std::uint64_t cnt = 0;
    for (std::uint64_t n = 1; n <= nx; ++n)
        if (is_smooth(n, y)) ++cnt;
    return cnt;
}

std::uint64_t FactorTable::count_rough_smooth_interval(double lo, double hi, double y,
                                                       double z) const {
    if (!(y < z)) throw std::invalid_argument("count_rough_smooth_interval: need y < z");
    if (hi < lo) return 0;
    const auto a = static_cast<std::uint64_t>(std::ceil(lo));
    const auto b = static_cast<std::uint64_t>(std::floor(hi));
    if (b > limit_) throw std::out_of_range("count_rough_smooth_interval: hi beyond table");
    std::uint64_t cnt = 0;
    for (std::uint64_t m = std::max<std::uint64_t>(a, 1); m <= b; ++m)
        if (is_rough(m, y) && is_smooth(m, z)) ++cnt;
    return cnt;
}

void for_each_prime(std::uint64_t lo, std::uint64_t hi,
                    const std::function<void(std::uint64_t)>& fn) {
    if (hi < 2 || hi < lo) return;
    lo = std::max<std::uint64_t>(lo, 2);
    const auto root = static_cast<std::uint64_t>(std::sqrt(static_cast<double>(hi))) + 1;

    // Base primes by simple sieve.
    std::vector<char> small(root + 1, 1);
    std::vector<std::uint64_t> base;
    for (std::uint64_t p = 2; p <= root; ++p) {
        if (!small[p]) continue;
        base.push_back(p);
        for (std::uint64_t m = p * p; m <= root; m += p) small[m] = 0;
    }
    for (std::uint64_t p : base)
        if (p >= lo && p <= hi) fn(p);

    std::vector<char> seg;
    for (std::uint64_t start = std::max(lo, root + 1); start <= hi; start += kSegmentLen) {
        const std::uint64_t end = std::min(hi, start + kSegmentLen - 1);
        seg.assign(end - start + 1, 1);
        for (std::uint64_t p : base) {
            std::uint64_t m = ((start + p - 1) / p) * p;
            if (m < p * p) m = p * p;
            for (; m <= end; m += p) seg[m - start] = 0;
        }
        for (std::uint64_t n = start; n <= end; ++n)
            if (seg[n - start]) fn(n);
    }
}

}  // namespace rmf
