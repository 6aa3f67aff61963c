#include <cmath>

#include "doctest.h"
#include "helpers.hpp"
#include "rmf/experiments.hpp"

using namespace rmf;
using rmf::testing::random_step;

namespace {

const FactorTable& table() {
    static const FactorTable t = FactorTable::build(100'000);
    return t;
}

}  // namespace

TEST_SUITE_BEGIN("experiments");

TEST_CASE("moment trend at q = 1 recovers floor(x)") {
    const auto rows = moment_trend(Model::steinhaus, 24601, table(), {100.0, 1000.0}, 1.0, 2000);
    REQUIRE(rows.size() == 2);
    CHECK(std::abs(rows[0].mean - 100.0) < 3.0 * rows[0].se);
    CHECK(std::abs(rows[1].mean - 1000.0) < 3.0 * rows[1].se);
}

TEST_CASE("moment trend at tiny q tends to one") {
    const auto rows = moment_trend(Model::steinhaus, 7, table(), {500.0}, 0.001, 400);
    CHECK(std::abs(rows[0].mean - 1.0) < 0.02);
}

TEST_CASE("clt ensemble is reproducible bit for bit") {
    CltEnsembleConfig cfg;
    cfg.x = 2000.0;
    cfg.eps = 0.2;
    cfg.delta = 0.2;
    cfg.trials = 50;
    cfg.seed = 99;
    cfg.with_bracket = true;
    const StepFunction u = StepFunction::unit_indicator();
    const auto e1 = run_clt_ensemble(table(), u, cfg);
    const auto e2 = run_clt_ensemble(table(), u, cfg);
    for (std::size_t i = 0; i < cfg.trials; ++i) {
        CHECK(e1.s_full[i] == e2.s_full[i]);
        CHECK(e1.s_trunc[i] == e2.s_trunc[i]);
        CHECK(e1.bracket[i] == e2.bracket[i]);
    }
}

TEST_CASE("quadratic homogeneity under step scaling") {
    CltEnsembleConfig cfg;
    cfg.x = 2000.0;
    cfg.eps = 0.2;
    cfg.delta = 0.2;
    cfg.trials = 10;
    cfg.seed = 4;
    cfg.with_bracket = true;
    cfg.with_vproxy = true;
    cfg.y_ref = 500.0;
    const StepFunction u = StepFunction::unit_indicator();
    const StepFunction two = u.scaled_value(cplx{2.0, 0.0});
    const auto e1 = run_clt_ensemble(table(), u, cfg);
    const auto e2 = run_clt_ensemble(table(), two, cfg);
    for (std::size_t i = 0; i < cfg.trials; ++i) {
        CHECK(std::abs(e2.s_trunc[i] - 2.0 * e1.s_trunc[i]) < 1e-12);
        CHECK(e2.bracket[i] == doctest::Approx(4.0 * e1.bracket[i]).epsilon(1e-12));
        CHECK(e2.vproxy[i] == doctest::Approx(4.0 * e1.vproxy[i]).epsilon(1e-12));
    }
}

TEST_CASE("limit test self-split sanity and rotation invariance") {
    CltEnsembleConfig cfg;
    cfg.x = 3000.0;
    cfg.eps = 0.2;
    cfg.delta = 0.2;
    cfg.trials = 400;
    cfg.seed = 11;
    const StepFunction u = StepFunction::unit_indicator();
    const auto e = run_clt_ensemble(table(), u, cfg);

    // two halves of the same ensemble: KS within the null band
    std::vector<double> a(e.s_trunc.size() / 2), b(e.s_trunc.size() - a.size());
    for (std::size_t i = 0; i < e.s_trunc.size(); ++i) {
        const double v = std::abs(e.s_trunc[i]);
        if (i < a.size())
            a[i] = v;
        else
            b[i - a.size()] = v;
    }
    const double ks = ks_scaled(ks_two_sample(a, b), a.size(), b.size());
    const auto all = e.abs_trunc();
    const double band = self_split_null_band(all, 300, 5);
    CHECK(ks <= band);

    // rotation invariance of the full-sum law
    const auto lt = limit_distribution_test(e.s_full, e.s_full, 31);
    CHECK(lt.rotation_ks_scaled <= lt.rotation_null_scaled * 1.25);
}

TEST_CASE("stable probe: constant h gives zero gap") {
    const StepFunction u = StepFunction::unit_indicator();
    const auto res =
        stable_convergence_probe(Model::steinhaus, 8, table(), u, 2000.0, 300.0, 60, 30.0);
    REQUIRE(!res.rows.empty());
    CHECK(res.rows[0].h_name == "one");
    CHECK(res.rows[0].gap == 0.0);
    for (const auto& r : res.rows) {
        CHECK(std::isfinite(r.lhs));
        CHECK(std::isfinite(r.rhs));
    }
}

TEST_CASE("bracket report on the degenerate zero step") {
    const StepFunction z({0.0, 1.0}, {cplx{0.0, 0.0}});
    const DickmanTable& rho = []() -> const DickmanTable& {
        static const DickmanTable t = DickmanTable::build(8.0, 1e-4);
        return t;
    }();
    const auto rows = bracket_convergence_report(Model::steinhaus, 3, table(), z, rho, 0.2, 0.2,
                                                 {2000.0}, 20, 20.0);
    REQUIRE(rows.size() == 1);
    CHECK(rows[0].ks == 0.0);  // both sides identically zero
}

TEST_CASE("gaussian reference scales with the factor") {
    const std::vector<double> v{1.0, 2.0, 0.5};
    const auto r1 = gaussian_reference(v, 1.0, 5);
    const auto r4 = gaussian_reference(v, 4.0, 5);
    for (std::size_t i = 0; i < v.size(); ++i)
        CHECK(std::abs(r4[i] - 2.0 * r1[i]) < 1e-12);
}

TEST_SUITE_END();
