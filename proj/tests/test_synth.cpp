#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <filesystem>
#include <string>
#include <vector>

#include "helpers.hpp"
#include "panelbreak/cointegration.hpp"
#include "panelbreak/diagnostics.hpp"
#include "panelbreak/dynamics.hpp"
#include "panelbreak/errors.hpp"
#include "panelbreak/ingest.hpp"
#include "panelbreak/regress.hpp"
#include "panelbreak/stats.hpp"
#include "panelbreak/synth.hpp"
#include "panelbreak/unit_root.hpp"
#include "panelbreak/vecm.hpp"

using namespace panelbreak;

namespace {

std::filesystem::path repo_data_dir() {
    return std::filesystem::path(__FILE__).parent_path().parent_path() / "data";
}

std::filesystem::path temp_dir() {
    auto dir = std::filesystem::temp_directory_path() / "panelbreak_synth_tests";
    std::filesystem::create_directories(dir);
    return dir;
}

}  // namespace

TEST_CASE("generator defaults pin the calibrated scenario parameters") {
    DgpSpec w = default_spec(DgpKind::independent_walks);
    CHECK(w.n_entities == 20);
    CHECK(w.n_periods == 50);
    CHECK(w.first_year == 1980);
    for (int v = 0; v < 4; ++v) CHECK(w.noise_sd(v) == doctest::Approx(0.15));
    CHECK(w.variables == std::vector<std::string>{"co2", "energy", "gdp", "pop"});

    DgpSpec c = default_spec(DgpKind::cointegrated);
    CHECK(c.coint_vector(0) == 1.0);
    CHECK(c.coint_vector(1) == doctest::Approx(-5.21));
    CHECK(c.coint_vector(2) == doctest::Approx(3.32));
    CHECK(c.coint_vector(3) == doctest::Approx(-0.43));
    CHECK(c.loadings(0) == doctest::Approx(-0.2));
    CHECK(c.rho_resid == doctest::Approx(0.8));
    CHECK(c.noise_sd(0) == doctest::Approx(0.05));

    DgpSpec cal = default_spec(DgpKind::vecm_calibrated);
    CHECK(cal.n_entities == 40);
    CHECK(cal.n_periods == 62);
    CHECK(cal.first_year == 1961);
    CHECK(cal.rho_resid == doctest::Approx(0.85));
    CHECK(cal.loadings(0) == doctest::Approx(-0.15));
    CHECK(cal.noise_sd(0) == doctest::Approx(0.08));
    CHECK(cal.noise_sd(1) == doctest::Approx(0.25));
}

TEST_CASE("generation is deterministic in the seed") {
    DgpSpec d = default_spec(DgpKind::cointegrated);
    d.n_entities = 6;
    d.n_periods = 30;
    d.seed = 424242;
    PanelDataset a = generate(d);
    PanelDataset b = generate(d);
    CHECK(a == b);

    d.seed = 424243;
    PanelDataset c = generate(d);
    CHECK_FALSE(a == c);
}

TEST_CASE("each entity draws from its own substream") {
    DgpSpec small = default_spec(DgpKind::independent_walks);
    small.n_entities = 3;
    small.n_periods = 40;
    small.seed = 5;
    DgpSpec big = small;
    big.n_entities = 5;

    PanelDataset ps = generate(small);
    PanelDataset pb = generate(big);
    for (const std::string entity : {"E001", "E002", "E003"}) {
        for (const std::string var : {"co2", "pop"}) {
            auto a = ps.series(entity, var);
            auto b = pb.series(entity, var);
            REQUIRE(a.has_value());
            REQUIRE(b.has_value());
            REQUIRE(a->data.size() == b->data.size());
            for (std::size_t t = 0; t < a->data.size(); ++t)
                CHECK(a->data[t] == b->data[t]);
        }
    }
}

TEST_CASE("a generated panel survives the file round trip unchanged") {
    DgpSpec d = default_spec(DgpKind::cointegrated);
    d.n_entities = 8;
    d.n_periods = 40;
    d.seed = 77;
    PanelDataset p = generate(d);

    const auto path = (temp_dir() / "roundtrip.csv").string();
    write_long_csv(p, path);
    PanelDataset back = parse_long_csv(path);
    CHECK(p == back);
}

TEST_CASE("the linked scenario embeds a stationary levels combination") {
    DgpSpec d = default_spec(DgpKind::cointegrated);
    d.n_entities = 20;
    d.n_periods = 100;
    d.noise_sd = Eigen::Vector4d::Constant(0.05);
    d.seed = 190000;
    PanelDataset p = generate(d);

    std::vector<double> pvals;
    for (const auto& entity : p.entities()) {
        auto c = p.series(entity, "co2");
        auto en = p.series(entity, "energy");
        auto g = p.series(entity, "gdp");
        auto po = p.series(entity, "pop");
        std::vector<double> z(c->data.size());
        for (std::size_t t = 0; t < z.size(); ++t)
            z[t] = c->data[t] - 5.21 * en->data[t] + 3.32 * g->data[t] - 0.43 * po->data[t];
        SeriesView sv{entity, "combo", z, c->first_year};
        AdfOutcome out = adf_stat(sv, stats::Deterministic::constant);
        CHECK(out.p_value > 0.0);
        CHECK(out.p_value < 1.0);
        pvals.push_back(out.p_value);
    }
    auto [stat, p_joint] = fisher_combine(pvals);
    CHECK(stat > 0.0);
    CHECK(p_joint < 0.01);
}

TEST_CASE("walk and mean-reverting scenarios land on opposite test outcomes") {
    DgpSpec walks = default_spec(DgpKind::independent_walks);
    walks.n_entities = 20;
    walks.n_periods = 100;
    walks.seed = 320001;
    PanelDataset pw = generate(walks);
    CHECK(llc_test(pw, "co2", false, stats::Deterministic::constant).p_value > 0.10);
    CHECK(ips_test(pw, "co2", false, stats::Deterministic::constant).p_value > 0.10);

    DgpSpec ar = default_spec(DgpKind::stationary_ar);
    ar.n_entities = 20;
    ar.n_periods = 100;
    ar.ar_coef = 0.5;
    ar.seed = 330000;
    PanelDataset pa = generate(ar);
    CHECK(llc_test(pa, "co2", false, stats::Deterministic::constant).p_value < 0.01);
    CHECK(ips_test(pa, "co2", false, stats::Deterministic::constant).p_value < 0.01);
}

TEST_CASE("the dispersion scenario doubles the first slope for later entities") {
    DgpSpec d = default_spec(DgpKind::heterogeneous_slopes);
    d.n_entities = 20;
    d.n_periods = 100;
    d.hetero_factor = 2.0;
    d.seed = 880001;
    PanelDataset p = generate(d);

    double first_half = 0.0, second_half = 0.0;
    for (std::size_t e = 0; e < p.n_entities(); ++e) {
        auto frame = entity_frame(p, p.entities()[e], {"co2", "energy", "gdp", "pop"});
        REQUIRE(frame.has_value());
        const auto n = static_cast<Eigen::Index>(frame->rows());
        Eigen::VectorXd y(n);
        Eigen::MatrixXd X(n, 4);
        for (Eigen::Index t = 0; t < n; ++t) {
            y(t) = frame->columns[0][static_cast<std::size_t>(t)];
            X(t, 0) = 1.0;
            for (int j = 1; j < 4; ++j)
                X(t, j) = frame->columns[static_cast<std::size_t>(j)][static_cast<std::size_t>(t)];
        }
        const double slope = ols(y, X).coefficients(1);
        (e < p.n_entities() / 2 ? first_half : second_half) += slope / 10.0;
    }
    CHECK(std::fabs(first_half - 0.5) < 0.1);
    CHECK(std::fabs(second_half - 1.0) < 0.1);
}

TEST_CASE("the bundled demonstration panel reproduces from its recorded seed") {
    DgpSpec d = default_spec(DgpKind::vecm_calibrated);
    d.seed = 12;
    PanelDataset generated = generate(d);

    const auto bundled_path = repo_data_dir() / "calibrated_panel.csv";
    REQUIRE(std::filesystem::exists(bundled_path));
    PanelDataset bundled = parse_long_csv(bundled_path.string());
    CHECK(generated == bundled);
}

TEST_CASE("the bundled demonstration panel carries the full model story") {
    DgpSpec d = default_spec(DgpKind::vecm_calibrated);
    d.seed = 12;
    PanelDataset p = build_policy_dummy(generate(d), "break2015", 2015);

    ModelSpec ms;  // defaults: four variables, break2015, two lags, rank one
    CointegratingVector cv = estimate_long_run(p, ms);
    CHECK(std::fabs(cv.normalized(1) - (-5.21)) < 0.5);
    CHECK(std::fabs(cv.dummy_t_hac[0]) < 1.96);  // the break indicator stays quiet

    VecmEstimate est = estimate_vecm(p, ms, cv);
    auto A = to_levels_var(est);
    CompanionForm roots = companion_roots(A);
    for (int i = 0; i < 3; ++i) {
        CHECK(roots.moduli[static_cast<std::size_t>(i)] >= 0.95);
        CHECK(roots.moduli[static_cast<std::size_t>(i)] <= 1.02);
    }
    CHECK(roots.moduli[3] < 0.95);

    FevdResult f = fevd(A, est.sigma, 24);
    const double own_h24 = f.shares[23](0, 0);
    CHECK(own_h24 >= 99.5);
    CHECK(own_h24 <= 100.0);

    PedroniResult ped = pedroni_tests(p, "co2", {"energy", "gdp", "pop"},
                                      stats::Deterministic::constant);
    CHECK(ped.decision_cointegrated);
}

TEST_CASE("impossible generator sizes are refused with a clear message") {
    DgpSpec d = default_spec(DgpKind::independent_walks);
    d.n_entities = 0;
    CHECK_THROWS_WITH_AS(generate(d), "generator needs n_entities >= 1 and n_periods >= 2",
                         InvalidSpec);

    DgpSpec d2 = default_spec(DgpKind::independent_walks);
    d2.n_periods = 1;
    CHECK_THROWS_AS(generate(d2), InvalidSpec);

    DgpSpec ok = default_spec(DgpKind::independent_walks);
    ok.n_entities = 2;
    ok.n_periods = 5;
    PanelDataset tiny = generate(ok);
    CHECK(tiny.n_entities() == 2);
    CHECK(tiny.n_years() == 5);
}
