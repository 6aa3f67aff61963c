#include <algorithm>
#include <cmath>
#include <cstdint>
#include <vector>

#include "doctest.h"
#include "rmf/dickman.hpp"
#include "rmf/primes.hpp"
#include "rmf/util.hpp"

using namespace rmf;

namespace {

// independent trial-division primality, used as the counting oracle
bool is_prime_td(std::uint64_t n) {
    if (n < 2) return false;
    if (n % 2 == 0) return n == 2;
    for (std::uint64_t d = 3; d * d <= n; d += 2)
        if (n % d == 0) return false;
    return true;
}

// independent factorization oracle
std::vector<std::uint64_t> factor_td(std::uint64_t n) {
    std::vector<std::uint64_t> fs;
    for (std::uint64_t d = 2; d * d <= n; ++d)
        while (n % d == 0) {
            fs.push_back(d);
            n /= d;
        }
    if (n > 1) fs.push_back(n);
    return fs;
}

const FactorTable& table_1e6() {
    static const FactorTable t = FactorTable::build(1'000'000);
    return t;
}

}  // namespace

TEST_SUITE_BEGIN("primes");

TEST_CASE("small table enumerations") {
    const FactorTable t = FactorTable::build(10);
    std::vector<std::uint32_t> primes(t.primes().begin(), t.primes().end());
    CHECK(primes == std::vector<std::uint32_t>{2, 3, 5, 7});
    CHECK(t.spf(9) == 3);
    CHECK(t.spf(10) == 2);
}

TEST_CASE("prime count at 1e6 against trial division") {
    std::uint64_t oracle = 0;
    for (std::uint64_t n = 2; n <= 1'000'000; ++n)
        if (is_prime_td(n)) ++oracle;
    CHECK(table_1e6().primes().size() == oracle);
    CHECK(oracle == 78498);
}

TEST_CASE("largest prime factor") {
    const auto& t = table_1e6();
    CHECK(t.largest_prime_factor(1) == 1);
    CHECK(t.largest_prime_factor(12) == 3);
    CHECK(t.largest_prime_factor(97) == 97);
    CHECK_THROWS_AS(t.largest_prime_factor(0), std::out_of_range);
    CHECK_THROWS_AS(t.largest_prime_factor(2'000'000), std::out_of_range);
}

TEST_CASE("second largest prime factor") {
    const auto& t = table_1e6();
    CHECK(t.second_largest_prime_factor(97) == 1);
    CHECK(t.second_largest_prime_factor(12) == 2);
    CHECK(t.second_largest_prime_factor(3 * 5 * 7) == 5);
    // brute-force cross-check: P(n / P(n)) from trial-division factors
    for (std::uint64_t n = 2; n <= 5000; ++n) {
        auto fs = factor_td(n);
        fs.pop_back();
        const std::uint64_t expect = fs.empty() ? 1 : fs.back();
        CHECK(t.second_largest_prime_factor(n) == expect);
    }
}

TEST_CASE("factorization reconstructs n") {
    const auto& t = table_1e6();
    for (std::uint64_t n = 2; n <= 20'000; ++n) {
        std::uint64_t prod = 1;
        std::uint64_t prev = 1;
        t.factorize(n, [&](std::uint64_t p, int e) {
            CHECK(p > prev);
            prev = p;
            for (int i = 0; i < e; ++i) prod *= p;
        });
        CHECK(prod == n);
    }
}

TEST_CASE("segmented fill matches linear sieve" * doctest::timeout(300)) {
    // a limit above the internal linear-sieve cap exercises the segmented path
    const FactorTable big = FactorTable::build(10'000'024);
    const auto& small = table_1e6();
    for (std::uint64_t n = 2; n <= 1'000'000; n += 997) CHECK(big.spf(n) == small.spf(n));
    CHECK(big.is_prime(10'000'019));  // first prime past 1e7
    for (std::uint64_t n = 10'000'001; n <= 10'000'024; ++n) {
        const auto fs = factor_td(n);
        CHECK(big.spf(n) == fs.front());
        CHECK(big.largest_prime_factor(n) == fs.back());
    }
}

TEST_CASE("mertens prime sum") {
    const auto& t = table_1e6();
    const double four = 1.0 / 2 + 1.0 / 3 + 1.0 / 5 + 1.0 / 7;
    CHECK(t.mertens_prime_sum(10.0) == doctest::Approx(four).epsilon(1e-14));

    // S(x) - log log x stabilizes near the Meissel-Mertens constant
    const double m5 = t.mertens_prime_sum(5e5) - std::log(std::log(5e5));
    const double m6 = t.mertens_prime_sum(1e6) - std::log(std::log(1e6));
    CHECK(std::abs(m6 - 0.26149721) < 5e-4);
    CHECK(std::abs(m6 - m5) < 2e-4);

    // monotone in x
    double prev = 0.0;
    for (double x : {10.0, 100.0, 1e3, 1e4, 1e5, 1e6}) {
        const double s = t.mertens_prime_sum(x);
        CHECK(s >= prev);
        prev = s;
    }
    // difference over [x, 2x]: decreasing upper envelope
    const double d3 = t.mertens_prime_sum(2e3) - t.mertens_prime_sum(1e3);
    const double d4 = t.mertens_prime_sum(2e4) - t.mertens_prime_sum(1e4);
    const double d5 = t.mertens_prime_sum(2e5) - t.mertens_prime_sum(1e5);
    CHECK(d3 > d4);
    CHECK(d4 > d5);
}

TEST_CASE("meissel-mertens constant from streamed sieve" * doctest::timeout(600)) {
    // sum 1/p - log log x over x = 1e6, 1e7, 1e8 (segmented mode)
    KahanSum s;
    std::uint64_t next_cp = 1'000'000;
    std::vector<double> ms;
    for_each_prime(2, 100'000'000, [&](std::uint64_t p) {
        while (next_cp != 0 && p > next_cp) {
            ms.push_back(s.value() - std::log(std::log(static_cast<double>(next_cp))));
            next_cp = next_cp == 10'000'000 ? 0 : next_cp * 10;
        }
        s.add(1.0 / static_cast<double>(p));
    });
    ms.push_back(s.value() - std::log(std::log(1e8)));
    REQUIRE(ms.size() == 3);
    for (double m : ms) CHECK(std::abs(m - 0.26149721) < 1e-3);
    const double extrap = richardson_extrapolate(
        {{1.0 / std::log(1e6), ms[0]}, {1.0 / std::log(1e7), ms[1]}, {1.0 / std::log(1e8), ms[2]}});
    CHECK(std::abs(extrap - 0.26149721) < 1e-3);
}

TEST_CASE("count_smooth") {
    const auto& t = table_1e6();
    CHECK(t.count_smooth(57.3, 57.3) == 57);
    CHECK(t.count_smooth(100.0, 100.0) == 100);

    // brute enumeration oracle at (100, 10)
    std::uint64_t oracle = 0;
    for (std::uint64_t n = 1; n <= 100; ++n) {
        const auto fs = factor_td(n);
        if (fs.empty() || fs.back() <= 10) ++oracle;
    }
    CHECK(t.count_smooth(100.0, 10.0) == oracle);

    // complement identity
    std::uint64_t rough = 0;
    for (std::uint64_t n = 1; n <= 2000; ++n)
        if (!t.is_smooth(n, 7.0)) ++rough;
    CHECK(t.count_smooth(2000.0, 7.0) + rough == 2000);

    // de Bruijn-type envelope: fit c at x = 1e5; must hold at x = 1e6 with
    // a 1.3 safety margin
    const double y = 100.0;
    const auto psi5 = static_cast<double>(t.count_smooth(1e5, y));
    const auto psi6 = static_cast<double>(t.count_smooth(1e6, y));
    const double c_fit = -std::log(psi5 / 1e5) * std::log(y) / std::log(1e5);
    CHECK(psi6 <= 1e6 * std::exp(-(c_fit / 1.3) * std::log(1e6) / std::log(y)));
}

TEST_CASE("count_rough_smooth_interval") {
    const auto& t = table_1e6();
    // y = 1: roughness vacuous, counts z-smooth only
    CHECK(t.count_rough_smooth_interval(1.0, 100.0, 1.0, 5.0) == t.count_smooth(100.0, 5.0));

    // brute force on a small window
    std::uint64_t oracle = 0;
    for (std::uint64_t m = 100; m <= 120; ++m)
        if (t.is_rough(m, 3.0) && t.is_smooth(m, 20.0)) ++oracle;
    CHECK(t.count_rough_smooth_interval(100.0, 120.0, 3.0, 20.0) == oracle);

    // short-interval envelope: fitted C stable across x
    const double y = 30.0, z = 1000.0;
    std::vector<double> cs;
    for (double x : {1e5, 2e5, 4e5}) {
        const double h = std::max(x / 16.0, y * z);
        const auto cnt = static_cast<double>(t.count_rough_smooth_interval(x, x + h, y, z));
        cs.push_back(cnt * std::log(x) * std::log(y) / (std::log(z) * h));
    }
    const double cmax = *std::max_element(cs.begin(), cs.end());
    const double cmin = *std::min_element(cs.begin(), cs.end());
    CHECK(cmax > 0.0);
    CHECK(cmax / cmin < 2.5);
}

TEST_CASE("chebyshev-type prime count bound") {
    const auto& t = table_1e6();
    const auto primes = t.primes();
    for (double x : {1e3, 1e4, 1e5, 5e5}) {
        const auto lo = std::lower_bound(primes.begin(), primes.end(), x);
        const auto hi = std::upper_bound(primes.begin(), primes.end(), 2 * x);
        const double count = static_cast<double>(hi - lo);
        CHECK(count * std::log(2 * x) / x < 1.6);
    }
}

TEST_CASE("capacity errors") {
    CHECK_THROWS_AS(FactorTable::build(std::uint64_t{1} << 33), capacity_error);
    CHECK_THROWS_AS(FactorTable::build(1), std::invalid_argument);
}

TEST_SUITE_END();
