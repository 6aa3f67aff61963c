#include <algorithm>
#include <cmath>

#include "doctest.h"
#include "rmf/concentration.hpp"
#include "rmf/util.hpp"

using namespace rmf;

TEST_SUITE_BEGIN("concentration");

TEST_CASE("bernstein tail formula") {
    CHECK(bernstein_tail(1.0, 1.0, 0.0) == 2.0);
    // monotone decreasing in x, increasing in v and c
    CHECK(bernstein_tail(1.0, 1.0, 1.0) > bernstein_tail(1.0, 1.0, 2.0));
    CHECK(bernstein_tail(2.0, 1.0, 1.0) > bernstein_tail(1.0, 1.0, 1.0));
    CHECK(bernstein_tail(1.0, 2.0, 1.0) > bernstein_tail(1.0, 1.0, 1.0));
    CHECK_THROWS_AS(bernstein_tail(0.0, 1.0, 1.0), std::invalid_argument);
}

TEST_CASE("bernstein bound dominates an empirical bounded-sum tail") {
    // n bounded centred variates; (v, c) from the moment condition
    const int n = 10'000;
    const std::size_t trials = 100'000;
    const double bound = 1.0;  // |X_i| <= 1, uniform on [-1, 1]
    // sum E|X_i|^r <= n E|X|^r <= n * (r!/2) v c^{r-2} holds with
    // v = n E X^2 = n/3, c = bound/3 (since E|X|^r <= 1/(r+1) <= (r!/2)(1/3)(1/3)^{r-2})
    const double v = n / 3.0, c = 1.0 / 3.0;
    std::vector<double> sums(trials);
    parallel_for(trials, [&](std::size_t i) {
        KahanSum s;
        for (int j = 0; j < n; ++j) s.add(2.0 * u01(prf(1234, i, j)) - 1.0);
        sums[i] = std::abs(s.value());
    });
    for (double mult : {1.0, 2.0, 3.0}) {
        const double x = mult * std::sqrt(v);
        std::size_t exceeded = 0;
        for (double s : sums)
            if (s >= x) ++exceeded;
        const double empirical = static_cast<double>(exceeded) / trials;
        CHECK(empirical <= bernstein_tail(v, c, x));
    }
    (void)bound;
}

TEST_CASE("admissible sequence invariants") {
    const AdmissibleSequence seq(-0.5, 0.5, 7);
    CHECK(seq.admissible());
    CHECK(seq.axis_points(0) == 1);
    CHECK(seq.axis_points(2) == 2);
    CHECK(seq.axis_points(4) == 16);
    CHECK(seq.axis_points(7) == (std::uint64_t{1} << 32));
    CHECK(seq.cardinality(3) == 64.0);  // 4^3
    // projection converges to the identity
    const std::array<double, 3> t{0.137, -0.42, 0.499};
    for (int n = 2; n <= 7; ++n) {
        const auto pn = seq.project(t, n);
        const auto pprev = seq.project(t, n - 1);
        (void)pprev;
        double d = 0.0;
        for (int i = 0; i < 3; ++i) d += (pn[i] - t[i]) * (pn[i] - t[i]);
        CHECK(std::sqrt(d) <= std::sqrt(3.0) / (seq.axis_points(n) - 1) + 1e-12);
    }
}

TEST_CASE("gamma functional behaviour") {
    const AdmissibleSequence seq(-0.5, 0.5, 7);
    // singleton truncation: every pi_n is the same point
    const AdmissibleSequence trivial(-0.5, 0.5, 2);
    // with max_level = 2 only one refinement exists; gamma counts a single hop
    CHECK(gamma_functional(trivial, 1.0, 1, 16) <= 4.0 * std::sqrt(3.0) + 1e-9);

    const double g1 = gamma_functional(seq, 1.0, 1, 32);
    const double g2 = gamma_functional(seq, 1.0, 2, 32);
    CHECK(g1 > 0.0);
    CHECK(g2 > 0.0);

    // exact linearity in the distance scale
    CHECK(gamma_functional(seq, 2.0, 1, 32) == doctest::Approx(2.0 * g1).epsilon(1e-12));
    CHECK(gamma_functional(seq, 10.0, 2, 32) == doctest::Approx(10.0 * g2).epsilon(1e-12));

    // gamma_k <= c K |I| with a stable c across |I| and K
    std::vector<double> cs;
    for (double len : {1.0, 2.0, 4.0}) {
        const AdmissibleSequence s2(0.0, len, 7);
        for (double k : {0.1, 1.0, 10.0})
            cs.push_back(gamma_functional(s2, k, 1, 24) / (k * len));
    }
    const double cmin = *std::min_element(cs.begin(), cs.end());
    const double cmax = *std::max_element(cs.begin(), cs.end());
    CHECK(cmax / cmin < 1.0 + 1e-9);  // exact proportionality in K and |I|
    CHECK(cmax < 25.0);

    // monotone nondecreasing in the truncation level
    const AdmissibleSequence s5(-0.5, 0.5, 5);
    const AdmissibleSequence s7(-0.5, 0.5, 7);
    CHECK(gamma_functional(s5, 1.0, 1, 24) <= gamma_functional(s7, 1.0, 1, 24) + 1e-12);
}

TEST_CASE("chaining tail formula and degenerate guard") {
    CHECK(chaining_tail(1.0, 1.0, 4.0, 0.0) == doctest::Approx(20.0));
    CHECK(chaining_tail(1.0, 1.0, 0.1, 0.0) == doctest::Approx(std::exp(2.0)));
    CHECK(chaining_tail(0.0, 0.0, 4.0, 0.0) == doctest::Approx(20.0));
    CHECK(chaining_tail(0.0, 0.0, 4.0, 0.5) == 0.0);
    // decreasing in x
    CHECK(chaining_tail(1.0, 1.0, 4.0, 1.0) > chaining_tail(1.0, 1.0, 4.0, 2.0));
}

TEST_SUITE_END();
