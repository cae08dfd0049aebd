#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <algorithm>
#include <cmath>
#include <vector>

#include "helpers.hpp"
#include "panelbreak/errors.hpp"
#include "panelbreak/rng.hpp"
#include "panelbreak/stats.hpp"
#include "panelbreak/synth.hpp"
#include "panelbreak/unit_root.hpp"

using namespace panelbreak;

namespace {

SeriesView make_series(std::vector<double> data, int first_year = 1900) {
    SeriesView s;
    s.entity = "E";
    s.variable = "x";
    s.data = std::move(data);
    s.first_year = first_year;
    return s;
}

std::vector<double> random_walk(SplitRng& rng, int n) {
    std::vector<double> y(static_cast<std::size_t>(n));
    double level = 0.0;
    for (auto& v : y) {
        level += rng.normal();
        v = level;
    }
    return y;
}

}  // namespace

TEST_CASE("the augmented regression holds its size on random walks") {
    int rejections = 0;
    const int reps = 1000;
    for (int r = 0; r < reps; ++r) {
        SplitRng rng(600000u + static_cast<unsigned>(r));
        AdfOutcome out = adf_stat(make_series(random_walk(rng, 500)), stats::Deterministic::constant);
        if (out.p < 0.05) ++rejections;
    }
    const double rate = double(rejections) / reps;
    CHECK(rate >= 0.03);
    CHECK(rate <= 0.07);
}

TEST_CASE("the augmented regression rejects white noise almost surely") {
    int rejections = 0;
    const int reps = 200;
    for (int r = 0; r < reps; ++r) {
        SplitRng rng(630000u + static_cast<unsigned>(r));
        std::vector<double> y(200);
        for (auto& v : y) v = rng.normal();
        if (adf_stat(make_series(y), stats::Deterministic::constant).p < 0.05) ++rejections;
    }
    CHECK(double(rejections) / reps >= 0.95);
}

TEST_CASE("a deterministic trend is not mistaken for mean reversion") {
    SplitRng rng(51);
    std::vector<double> y(200);
    for (std::size_t t = 0; t < y.size(); ++t) y[t] = double(t) + 0.1 * rng.normal();
    AdfOutcome out = adf_stat(make_series(y), stats::Deterministic::constant);
    CHECK(out.stat > -1.0);
    CHECK(out.p > 0.5);

    // an exactly deterministic line leaves nothing to estimate
    std::vector<double> line(100);
    for (std::size_t t = 0; t < line.size(); ++t) line[t] = double(t);
    CHECK_THROWS_AS(adf_stat(make_series(line), stats::Deterministic::constant),
                    RankDeficient);
}

TEST_CASE("the semiparametric statistic equals the zero-lag regression on white noise") {
    SplitRng rng(41);
    std::vector<double> y(1000);
    for (auto& v : y) v = rng.normal();
    SeriesView s = make_series(y);
    AdfOutcome a = adf_stat(s, stats::Deterministic::constant, 0);
    AdfOutcome p = pp_stat(s, stats::Deterministic::constant);
    CHECK(std::fabs(a.stat - p.stat) < 0.02);
}

TEST_CASE("the semiparametric statistic holds its size on random walks") {
    int rejections = 0;
    const int reps = 1000;
    for (int r = 0; r < reps; ++r) {
        SplitRng rng(610000u + static_cast<unsigned>(r));
        if (pp_stat(make_series(random_walk(rng, 500)), stats::Deterministic::constant).p < 0.05)
            ++rejections;
    }
    const double rate = double(rejections) / reps;
    CHECK(rate >= 0.03);
    CHECK(rate <= 0.07);
}

TEST_CASE("the long-run correction helps under negatively correlated errors") {
    int pp_rej = 0, adf0_rej = 0;
    const int reps = 400;
    for (int r = 0; r < reps; ++r) {
        SplitRng rng(620000u + static_cast<unsigned>(r));
        std::vector<double> y(200);
        double level = 0.0, prev = rng.normal();
        for (auto& v : y) {
            const double e = rng.normal();
            level += e - 0.5 * prev;  // walk with negative moving-average increments
            prev = e;
            v = level;
        }
        SeriesView s = make_series(y);
        if (pp_stat(s, stats::Deterministic::constant).p < 0.05) ++pp_rej;
        if (adf_stat(s, stats::Deterministic::constant, 0).p < 0.05) ++adf0_rej;
    }
    const double pp_rate = double(pp_rej) / reps;
    const double adf0_rate = double(adf0_rej) / reps;
    // both over-reject here, but the kernel-corrected statistic is much closer to nominal
    CHECK(pp_rate < adf0_rate);
    CHECK(std::fabs(pp_rate - 0.05) < std::fabs(adf0_rate - 0.05));
}

TEST_CASE("pooled and group-mean panel tests hold their size on independent walks") {
    int llc_rej = 0, ips_rej = 0;
    const int reps = 500;
    for (int r = 0; r < reps; ++r) {
        DgpSpec d = default_spec(DgpKind::independent_walks);
        d.n_entities = 20;
        d.n_periods = 100;
        d.seed = 320000u + static_cast<unsigned>(r);
        PanelDataset p = generate(d);
        if (llc_test(p, "co2", false, stats::Deterministic::constant).p_value < 0.05) ++llc_rej;
        if (ips_test(p, "co2", false, stats::Deterministic::constant).p_value < 0.05) ++ips_rej;
    }
    const double llc_rate = double(llc_rej) / reps;
    const double ips_rate = double(ips_rej) / reps;
    CHECK(llc_rate >= 0.02);
    CHECK(llc_rate <= 0.10);
    CHECK(ips_rate >= 0.02);
    CHECK(ips_rate <= 0.10);
}

TEST_CASE("pooled and group-mean panel tests reject stationary panels") {
    int llc_rej = 0, ips_rej = 0;
    const int reps = 500;
    for (int r = 0; r < reps; ++r) {
        DgpSpec d = default_spec(DgpKind::stationary_ar);
        d.n_entities = 20;
        d.n_periods = 100;
        d.ar_coef = 0.5;
        d.seed = 330000u + static_cast<unsigned>(r);
        PanelDataset p = generate(d);
        if (llc_test(p, "co2", false, stats::Deterministic::constant).p_value < 0.05) ++llc_rej;
        if (ips_test(p, "co2", false, stats::Deterministic::constant).p_value < 0.05) ++ips_rej;
    }
    CHECK(double(llc_rej) / reps >= 0.90);
    CHECK(double(ips_rej) / reps >= 0.90);
}

TEST_CASE("differencing a walk panel flips every test to rejection") {
    int flipped[4] = {0, 0, 0, 0};
    const int reps = 200;
    for (int r = 0; r < reps; ++r) {
        DgpSpec d = default_spec(DgpKind::independent_walks);
        d.n_entities = 20;
        d.n_periods = 100;
        d.seed = 340000u + static_cast<unsigned>(r);
        PanelDataset p = generate(d);
        const auto det = stats::Deterministic::constant;
        if (llc_test(p, "co2", true, det).p_value < 0.01) ++flipped[0];
        if (ips_test(p, "co2", true, det).p_value < 0.01) ++flipped[1];
        if (adf_fisher_test(p, "co2", true, det).p_value < 0.01) ++flipped[2];
        if (pp_fisher_test(p, "co2", true, det).p_value < 0.01) ++flipped[3];
    }
    for (int k = 0; k < 4; ++k) CHECK(double(flipped[k]) / reps >= 0.95);
}

TEST_CASE("a clear walk panel is jointly not rejected and carries detail rows") {
    DgpSpec d = default_spec(DgpKind::independent_walks);
    d.n_entities = 20;
    d.n_periods = 100;
    d.seed = 320001;
    PanelDataset p = generate(d);

    UnitRootResult llc = llc_test(p, "co2", false, stats::Deterministic::constant);
    UnitRootResult ips = ips_test(p, "co2", false, stats::Deterministic::constant);
    CHECK(llc.p_value > 0.10);
    CHECK(ips.p_value > 0.10);
    CHECK(llc.method == UnitRootMethod::llc);
    CHECK(ips.method == UnitRootMethod::ips);
    CHECK_FALSE(llc.differenced);
    CHECK(llc.deterministic == stats::Deterministic::constant);
    CHECK(ips.per_entity.size() == 20);
    for (const auto& row : ips.per_entity) {
        CHECK(row.p > 0.0);
        CHECK(row.p < 1.0);
    }
}

TEST_CASE("combining exact p-values follows the analytic identity") {
    // ten p-values all equal to exp(-1): each contributes exactly 2 to the statistic
    std::vector<double> ps(10, std::exp(-1.0));
    auto [stat, p] = fisher_combine(ps);
    CHECK(std::fabs(stat - 20.0) < 1e-12);
    CHECK(std::fabs(p - stats::chi2_sf(20.0, 20.0)) < 1e-14);

    std::vector<double> one(4, std::exp(-1.0));
    auto [stat4, p4] = fisher_combine(one);
    CHECK(std::fabs(stat4 - 8.0) < 1e-12);

    // lowering one input strictly raises the statistic and lowers the combination
    std::vector<double> lower = ps;
    lower[0] = 0.01;
    auto [stat2, p2] = fisher_combine(lower);
    CHECK(stat2 > stat);
    CHECK(p2 < p);

    CHECK_THROWS_AS(fisher_combine(std::vector<double>{0.5, 0.0}), InvalidPValue);
    CHECK_THROWS_AS(fisher_combine(std::vector<double>{0.5, 1.0000001}), InvalidPValue);
    CHECK_THROWS_AS(fisher_combine(std::vector<double>{}), InvalidPValue);
}

TEST_CASE("combined p-values stay uniform under the null") {
    SplitRng rng(61);
    const int reps = 2000, n = 50;
    std::vector<double> combined(reps);
    for (int r = 0; r < reps; ++r) {
        std::vector<double> ps(n);
        for (auto& v : ps) v = rng.uniform();
        combined[static_cast<std::size_t>(r)] = fisher_combine(ps).second;
    }
    std::sort(combined.begin(), combined.end());
    double d_stat = 0.0;
    for (int i = 0; i < reps; ++i) {
        const double ecdf_hi = double(i + 1) / reps;
        const double ecdf_lo = double(i) / reps;
        d_stat = std::max(d_stat, std::fabs(ecdf_hi - combined[static_cast<std::size_t>(i)]));
        d_stat = std::max(d_stat, std::fabs(combined[static_cast<std::size_t>(i)] - ecdf_lo));
    }
    CHECK(d_stat < 1.628 / std::sqrt(double(reps)));  // 1% critical value
}

TEST_CASE("the four panel tests agree on clear-cut panels") {
    int agree = 0, total = 0;
    for (int kind = 0; kind < 2; ++kind) {
        for (int r = 0; r < 100; ++r) {
            DgpSpec d = default_spec(kind == 0 ? DgpKind::independent_walks
                                               : DgpKind::stationary_ar);
            d.n_entities = 20;
            d.n_periods = 100;
            d.ar_coef = 0.3;
            d.seed = 90000u + static_cast<unsigned>(kind) * 1000u + static_cast<unsigned>(r);
            PanelDataset p = generate(d);
            bool rej[4];
            const auto det = stats::Deterministic::constant;
            rej[0] = llc_test(p, "co2", false, det).p_value < 0.05;
            rej[1] = ips_test(p, "co2", false, det).p_value < 0.05;
            rej[2] = adf_fisher_test(p, "co2", false, det).p_value < 0.05;
            rej[3] = pp_fisher_test(p, "co2", false, det).p_value < 0.05;
            const bool all = rej[0] && rej[1] && rej[2] && rej[3];
            const bool none = !rej[0] && !rej[1] && !rej[2] && !rej[3];
            if (all || none) ++agree;
            ++total;
        }
    }
    CHECK(double(agree) / total >= 0.90);
}

TEST_CASE("panel tests refuse degenerate inputs") {
    std::vector<Observation> obs;
    for (int t = 0; t < 30; ++t) obs.push_back({"ONLY", 1990 + t, "x", double(t % 7)});
    PanelOptions options;
    options.min_obs = 10;
    PanelDataset single = PanelDataset::from_observations({"x"}, obs, options);
    CHECK_THROWS_AS(llc_test(single, "x", false, stats::Deterministic::constant),
                    InsufficientEntities);

    DgpSpec d = default_spec(DgpKind::independent_walks);
    d.seed = 5;
    PanelDataset p = generate(d);
    CHECK_THROWS_AS(ips_test(p, "co2", false, stats::Deterministic::none), InvalidSpec);
    CHECK_THROWS_AS(llc_test(p, "nope", false, stats::Deterministic::constant), UnknownVariable);
}
