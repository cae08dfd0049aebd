#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>

#include "panelbreak/stats.hpp"

using namespace panelbreak::stats;

TEST_CASE("normal distribution anchors and identities") {
    CHECK(normal_cdf(0.0) == doctest::Approx(0.5).epsilon(1e-15));
    CHECK(normal_cdf(1.959963984540054) == doctest::Approx(0.975).epsilon(1e-12));
    CHECK(normal_cdf(-1.959963984540054) == doctest::Approx(0.025).epsilon(1e-12));

    for (double x : {-3.0, -1.2, 0.0, 0.7, 2.5}) {
        CHECK(normal_sf(x) == doctest::Approx(1.0 - normal_cdf(x)).epsilon(1e-12));
    }
    for (double p : {0.001, 0.025, 0.5, 0.8, 0.999}) {
        CHECK(normal_cdf(normal_ppf(p)) == doctest::Approx(p).epsilon(1e-10));
    }
    CHECK(normal_ppf(0.975) == doctest::Approx(1.959963984540054).epsilon(1e-9));
}

TEST_CASE("chi-square distribution anchors") {
    // with two degrees of freedom the distribution is exponential with mean 2
    CHECK(chi2_cdf(2.0, 2.0) == doctest::Approx(1.0 - std::exp(-1.0)).epsilon(1e-12));
    CHECK(chi2_sf(2.0, 2.0) == doctest::Approx(std::exp(-1.0)).epsilon(1e-12));
    for (double x : {0.5, 1.0, 3.84, 10.0}) {
        CHECK(chi2_cdf(x, 4.0) + chi2_sf(x, 4.0) == doctest::Approx(1.0).epsilon(1e-12));
    }
    CHECK(chi2_sf(3.841458820694124, 1.0) == doctest::Approx(0.05).epsilon(1e-9));
}

TEST_CASE("the f distribution collapses to chi-square as the denominator grows") {
    const double x = 3.84;
    CHECK(f_sf(x, 1.0, 1e7) == doctest::Approx(chi2_sf(x, 1.0)).epsilon(1e-4));
    CHECK(f_sf(2.0, 3.0, 1e7) == doctest::Approx(chi2_sf(6.0, 3.0)).epsilon(1e-4));
    // monotone decreasing in the statistic
    CHECK(f_sf(1.0, 3.0, 20.0) > f_sf(2.0, 3.0, 20.0));
    CHECK(f_sf(2.0, 3.0, 20.0) > f_sf(4.0, 3.0, 20.0));
}

TEST_CASE("unit-root p-value surface hits the classic five percent anchors") {
    // constant case: tau = -2.86 sits at roughly the 5% point
    const double p_const = mackinnon_pvalue(-2.86, Deterministic::constant);
    CHECK(p_const > 0.04);
    CHECK(p_const < 0.06);
    // no deterministics: tau = -1.94
    const double p_none = mackinnon_pvalue(-1.94, Deterministic::none);
    CHECK(p_none > 0.04);
    CHECK(p_none < 0.06);
    // constant and trend: tau = -3.41
    const double p_trend = mackinnon_pvalue(-3.41, Deterministic::constant_trend);
    CHECK(p_trend > 0.04);
    CHECK(p_trend < 0.06);
}

TEST_CASE("unit-root p-values are monotone and clamped to the unit interval") {
    for (auto det : {Deterministic::none, Deterministic::constant, Deterministic::constant_trend}) {
        double last = -1.0;
        for (double tau = -12.0; tau <= 6.0; tau += 0.25) {
            const double p = mackinnon_pvalue(tau, det);
            CHECK(p >= 0.0);
            CHECK(p <= 1.0);
            CHECK(p >= last - 1e-12);  // nondecreasing in tau
            last = p;
        }
        CHECK(mackinnon_pvalue(-12.0, det) < 1e-6);
        CHECK(mackinnon_pvalue(6.0, det) > 0.99);
    }
}

TEST_CASE("deterministic-term labels round-trip") {
    CHECK(to_string(Deterministic::none) == std::string("none"));
    CHECK(to_string(Deterministic::constant) == std::string("constant"));
    CHECK(to_string(Deterministic::constant_trend) == std::string("constant_trend"));
}
