#include <cmath>

#include "doctest.h"
#include "ecx/econometrics.hpp"
#include "ecx/errors.hpp"
#include "ecx/rng.hpp"
#include "ecx/synth.hpp"

using namespace ecx;

namespace {

PanelSpec ar1_spec() {
    PanelSpec spec;
    spec.dependent = "y";
    spec.regressors = {"x"};
    spec.include_lagged_dependent = true;
    spec.horizon = 1;
    spec.lag_mode = LagMode::one_year;
    return spec;
}

RegressionTable ar1_table(const synth::DynamicPanelData& d) {
    return build_panel({&d.y, &d.x}, ar1_spec());
}

synth::DynamicPanelSpec mc_design(std::uint64_t seed, int n = 500, int t = 8) {
    synth::DynamicPanelSpec g;
    g.n_regions = n;
    g.n_periods = t;
    g.rho = 0.5;
    g.beta = 1.0;
    g.sigma_mu = 1.0;
    g.sigma_eps = 1.0;
    g.seed = seed;
    return g;
}

}  // namespace

TEST_CASE("system gmm estimates an AR(1) panel on a single draw") {
    const auto d = synth::gen_dynamic_panel(mc_design(42));
    const auto table = ar1_table(d);
    const auto res = system_gmm(table, ar1_spec(), GmmOptions{});
    const auto* rho = res.find("y_lag");
    const auto* beta = res.find("x");
    REQUIRE(rho != nullptr);
    REQUIRE(beta != nullptr);
    CHECK(std::abs(rho->estimate - 0.5) < 0.1);
    CHECK(std::abs(beta->estimate - 1.0) < 0.1);
    CHECK(rho->std_error > 0.0);
    CHECK(res.n_instruments < res.n_regions);
    REQUIRE(res.sargan.has_value());
    CHECK(res.sargan->statistic >= 0.0);
    CHECK(res.sargan->p_value >= 0.0);
    CHECK(res.sargan->p_value <= 1.0);
    REQUIRE(res.ar1_test.has_value());
    CHECK(res.ar1_test->z < -2.0);  // differencing induces negative first-order correlation
    REQUIRE(res.ar2_test.has_value());
    CHECK(res.ar2_test->p_value >= 0.0);
    CHECK(res.ar2_test->p_value <= 1.0);
}

TEST_CASE("system gmm preconditions and error paths") {
    SUBCASE("T = 3 cannot satisfy the lag requirements") {
        auto g = mc_design(1, 50, 3);
        const auto d = synth::gen_dynamic_panel(g);
        const auto table = ar1_table(d);
        CHECK_THROWS_WITH_AS(system_gmm(table, ar1_spec(), GmmOptions{}),
                             doctest::Contains("4 usable periods"), DataError);
    }
    SUBCASE("lagged dependent is required") {
        const auto d = synth::gen_dynamic_panel(mc_design(2, 50, 8));
        PanelSpec spec = ar1_spec();
        spec.include_lagged_dependent = false;
        const auto table = build_panel({&d.y, &d.x}, spec);
        CHECK_THROWS_AS(system_gmm(table, spec, GmmOptions{}), DataError);
    }
    SUBCASE("uncollapsed instruments on a small panel proliferate") {
        const auto d = synth::gen_dynamic_panel(mc_design(3, 30, 8));
        const auto table = ar1_table(d);
        GmmOptions opt;
        opt.collapse_instruments = false;
        CHECK_THROWS_WITH_AS(system_gmm(table, ar1_spec(), opt),
                             doctest::Contains("instrument proliferation"), NumericalError);
    }
    SUBCASE("just-identified models cannot be Sargan-tested") {
        const auto d = synth::gen_dynamic_panel(mc_design(4, 100, 8));
        auto fit = system_gmm_fit(ar1_table(d), ar1_spec(), GmmOptions{});
        fit.n_params = fit.n_instruments;  // force the just-identified case
        CHECK_THROWS_WITH_AS(sargan_test(fit), doctest::Contains("not overidentified"),
                             NumericalError);
    }
}

TEST_CASE("arellano-bond test needs enough usable lag pairs") {
    // Gapped years leave a single usable difference year, so no lag pair
    // exists at any order.
    IndicatorSeries y("y", ""), x("x", "");
    ecx::Rng rng_seeded(5);
    for (int i = 0; i < 40; ++i) {
        const std::string r = "R" + std::to_string(100 + i);
        for (int t : {2001, 2002, 2003, 2006, 2007, 2010, 2011}) {
            y.set(r, t, rng_seeded.normal());
            x.set(r, t, rng_seeded.normal());
        }
    }
    const auto table = build_panel({&y, &x}, ar1_spec());
    const auto fit = system_gmm_fit(table, ar1_spec(), GmmOptions{});
    CHECK_THROWS_WITH_AS(arellano_bond_test(fit, 2), doctest::Contains("insufficient"),
                         DataError);
}

TEST_CASE("monte carlo: system gmm recovers rho and beta, FE shows Nickell bias" *
          doctest::test_suite("montecarlo")) {
    const int n_seeds = 50;
    double sum_rho_gmm = 0.0, sum_beta_gmm = 0.0, sum_rho_fe = 0.0;
    for (int s = 0; s < n_seeds; ++s) {
        const auto d = synth::gen_dynamic_panel(mc_design(1000 + s));
        const auto table = ar1_table(d);
        const auto gmm = system_gmm(table, ar1_spec(), GmmOptions{});
        sum_rho_gmm += gmm.find("y_lag")->estimate;
        sum_beta_gmm += gmm.find("x")->estimate;
        const auto fe = within_fe(table, ar1_spec());
        sum_rho_fe += fe.find("y_lag")->estimate;
    }
    const double mean_rho = sum_rho_gmm / n_seeds;
    const double mean_beta = sum_beta_gmm / n_seeds;
    const double mean_rho_fe = sum_rho_fe / n_seeds;
    CAPTURE(mean_rho);
    CAPTURE(mean_beta);
    CAPTURE(mean_rho_fe);
    CHECK(mean_rho > 0.45);
    CHECK(mean_rho < 0.55);
    CHECK(mean_beta > 0.95);
    CHECK(mean_beta < 1.05);
    // Downward Nickell bias of order 1/T in the fixed-effects estimate.
    CHECK(mean_rho_fe < mean_rho - 0.02);
}

TEST_CASE("monte carlo: one-step and two-step agree under homoskedasticity" *
          doctest::test_suite("montecarlo")) {
    const int n_seeds = 20;
    double diff_rho = 0.0;
    for (int s = 0; s < n_seeds; ++s) {
        const auto d = synth::gen_dynamic_panel(mc_design(3000 + s));
        const auto table = ar1_table(d);
        GmmOptions two;
        two.two_step = true;
        const auto r1 = system_gmm(table, ar1_spec(), GmmOptions{});
        const auto r2 = system_gmm(table, ar1_spec(), two);
        CHECK(r2.estimator == Estimator::system_gmm_two_step);
        diff_rho += r1.find("y_lag")->estimate - r2.find("y_lag")->estimate;
    }
    CHECK(std::abs(diff_rho / n_seeds) < 0.02);
}

TEST_CASE("monte carlo: sargan calibration and power" * doctest::test_suite("montecarlo")) {
    const int n_seeds = 200;
    int reject_correct = 0, reject_invalid = 0;
    for (int s = 0; s < n_seeds; ++s) {
        {
            const auto d = synth::gen_dynamic_panel(mc_design(5000 + s));
            const auto res = system_gmm(ar1_table(d), ar1_spec(), GmmOptions{});
            if (res.sargan->p_value < 0.05) ++reject_correct;
        }
        {
            // Serially correlated errors invalidate the lagged-level
            // instruments.
            auto g = mc_design(7000 + s);
            g.ar_eps = 0.6;
            const auto d = synth::gen_dynamic_panel(g);
            const auto res = system_gmm(ar1_table(d), ar1_spec(), GmmOptions{});
            if (res.sargan->p_value < 0.05) ++reject_invalid;
        }
    }
    const double rate_correct = 100.0 * reject_correct / n_seeds;
    const double rate_invalid = 100.0 * reject_invalid / n_seeds;
    CAPTURE(rate_correct);
    CAPTURE(rate_invalid);
    CHECK(rate_correct >= 2.0);
    CHECK(rate_correct <= 9.0);
    CHECK(rate_invalid > 50.0);
}

TEST_CASE("monte carlo: AR(2) calibration under iid and power under AR(1) errors" *
          doctest::test_suite("montecarlo")) {
    const int n_seeds = 200;
    int reject_iid = 0, reject_ar = 0;
    for (int s = 0; s < n_seeds; ++s) {
        {
            const auto d = synth::gen_dynamic_panel(mc_design(9000 + s));
            const auto res = system_gmm(ar1_table(d), ar1_spec(), GmmOptions{});
            if (res.ar2_test->p_value < 0.05) ++reject_iid;
        }
        {
            auto g = mc_design(11000 + s);
            g.ar_eps = 0.5;
            const auto d = synth::gen_dynamic_panel(g);
            const auto res = system_gmm(ar1_table(d), ar1_spec(), GmmOptions{});
            if (res.ar2_test->p_value < 0.05) ++reject_ar;
        }
    }
    const double rate_iid = 100.0 * reject_iid / n_seeds;
    const double rate_ar = 100.0 * reject_ar / n_seeds;
    CAPTURE(rate_iid);
    CAPTURE(rate_ar);
    CHECK(rate_iid >= 2.0);
    CHECK(rate_iid <= 9.0);
    CHECK(rate_ar > 50.0);
}
