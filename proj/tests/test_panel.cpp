#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <algorithm>
#include <cmath>
#include <random>

#include "helpers.hpp"
#include "panelbreak/errors.hpp"
#include "panelbreak/panel.hpp"
#include "panelbreak/rng.hpp"

using namespace panelbreak;
using testutil::make_panel;

namespace {

SeriesView make_series(std::vector<double> data, int first_year = 2000) {
    SeriesView s;
    s.entity = "e";
    s.variable = "x";
    s.data = std::move(data);
    s.first_year = first_year;
    return s;
}

}  // namespace

TEST_CASE("first difference computes adjacent gaps and advances the start year") {
    SeriesView s = make_series({1.0, 3.0, 6.0, 10.0}, 1990);
    SeriesView d = first_difference(s);
    REQUIRE(d.data.size() == 3);
    CHECK(d.data[0] == doctest::Approx(2.0).epsilon(1e-15));
    CHECK(d.data[1] == doctest::Approx(3.0).epsilon(1e-15));
    CHECK(d.data[2] == doctest::Approx(4.0).epsilon(1e-15));
    CHECK(d.first_year == 1991);
    CHECK(d.entity == s.entity);
    CHECK(d.variable == s.variable);

    SeriesView flat = make_series({5.0, 5.0, 5.0});
    SeriesView df = first_difference(flat);
    for (double v : df.data) CHECK(v == 0.0);
}

TEST_CASE("first difference undoes cumulative summation") {
    SplitRng rng(100);
    std::vector<double> steps(100);
    for (auto& v : steps) v = rng.normal();
    std::vector<double> levels(steps.size() + 1, 0.0);
    levels[0] = rng.normal();
    for (std::size_t t = 0; t < steps.size(); ++t) levels[t + 1] = levels[t] + steps[t];

    SeriesView d = first_difference(make_series(levels));
    REQUIRE(d.data.size() == steps.size());
    for (std::size_t t = 0; t < steps.size(); ++t)
        CHECK(std::fabs(d.data[t] - steps[t]) < 1e-12);
}

TEST_CASE("first difference refuses a single observation") {
    CHECK_THROWS_AS(first_difference(make_series({1.0})), SeriesTooShort);
}

TEST_CASE("lagging drops trailing values and shifts the alignment year") {
    SeriesView s = make_series({10.0, 20.0, 30.0, 40.0, 50.0}, 1980);
    SeriesView l2 = lag(s, 2);
    REQUIRE(l2.data.size() == 3);
    CHECK(l2.data[0] == 10.0);
    CHECK(l2.data[1] == 20.0);
    CHECK(l2.data[2] == 30.0);
    CHECK(l2.first_year == 1982);

    SeriesView l0 = lag(s, 0);
    CHECK(l0.data == s.data);
    CHECK(l0.first_year == s.first_year);

    CHECK_THROWS_AS(lag(s, 5), SeriesTooShort);
}

TEST_CASE("regressing a series on its own lag recovers the autoregressive slope") {
    SplitRng rng(21);
    const int n = 500;
    std::vector<double> y(n);
    y[0] = rng.normal();
    for (int t = 1; t < n; ++t) y[t] = 0.5 * y[t - 1] + rng.normal();

    SeriesView s = make_series(y);
    SeriesView ylag = lag(s, 1);
    Eigen::VectorXd dep(n - 1);
    Eigen::MatrixXd X(n - 1, 2);
    for (int t = 0; t < n - 1; ++t) {
        dep(t) = y[static_cast<std::size_t>(t + 1)];
        X(t, 0) = 1.0;
        X(t, 1) = ylag.data[static_cast<std::size_t>(t)];
    }
    OlsFit fit = ols(dep, X);
    const double dev = std::fabs(fit.coefficients(1) - 0.5);
    CHECK(dev < 3.0 * fit.std_error(1));
}

TEST_CASE("within transformation removes entity means") {
    PanelDataset p = make_panel(testutil::entity_names(2), {"x"},
                                {{{11.0, 12.0, 13.0}}, {{-5.0, -4.0, -3.0}}});
    PanelDataset d = within_demean(p, "x");

    auto s0 = d.series("E00", "x");
    REQUIRE(s0.has_value());
    CHECK(s0->data[0] == doctest::Approx(-1.0).epsilon(1e-12));
    CHECK(s0->data[1] == doctest::Approx(0.0).epsilon(1e-12));
    CHECK(s0->data[2] == doctest::Approx(1.0).epsilon(1e-12));

    for (const auto& e : d.entities()) {
        auto sv = d.series(e, "x");
        double mean = 0.0;
        for (double v : sv->data) mean += v;
        mean /= static_cast<double>(sv->data.size());
        CHECK(std::fabs(mean) < 1e-10);
    }

    CHECK_THROWS_AS(within_demean(p, "nope"), UnknownVariable);
}

TEST_CASE("within transformation is idempotent and linear") {
    SplitRng rng(101);
    std::vector<std::vector<std::vector<double>>> data(4);
    for (auto& e : data) {
        e.resize(3);
        for (int v = 0; v < 2; ++v) {
            e[static_cast<std::size_t>(v)].resize(20);
            for (auto& x : e[static_cast<std::size_t>(v)]) x = rng.normal() + 3.0 * rng.uniform();
        }
        // third variable is an exact linear combination: w = 3u - 2v + 1
        e[2].resize(20);
        for (std::size_t t = 0; t < 20; ++t) e[2][t] = 3.0 * e[0][t] - 2.0 * e[1][t] + 1.0;
    }
    PanelDataset p = make_panel(testutil::entity_names(4), {"u", "v", "w"}, data);

    PanelDataset once = within_demean(p, "u");
    PanelDataset twice = within_demean(once, "u");
    for (const auto& e : p.entities()) {
        auto a = once.series(e, "u");
        auto b = twice.series(e, "u");
        for (std::size_t t = 0; t < a->data.size(); ++t)
            CHECK(std::fabs(a->data[t] - b->data[t]) < 1e-12);
    }

    PanelDataset du = within_demean(p, "u");
    PanelDataset dv = within_demean(p, "v");
    PanelDataset dw = within_demean(p, "w");
    for (const auto& e : p.entities()) {
        auto su = du.series(e, "u");
        auto sv = dv.series(e, "v");
        auto sw = dw.series(e, "w");
        for (std::size_t t = 0; t < su->data.size(); ++t) {
            const double expect = 3.0 * su->data[t] - 2.0 * sv->data[t];  // constant demeans away
            CHECK(std::fabs(sw->data[t] - expect) < 1e-10);
        }
    }
}

TEST_CASE("panel equality is independent of observation order") {
    std::vector<Observation> obs;
    for (int e = 0; e < 3; ++e) {
        for (int t = 0; t < 12; ++t) {
            obs.push_back({"E" + std::to_string(e), 1990 + t, "x", e * 100.0 + t});
            obs.push_back({"E" + std::to_string(e), 1990 + t, "y", e * 100.0 - t});
        }
    }
    PanelOptions options;
    options.min_obs = 1;
    PanelDataset a = PanelDataset::from_observations({"x", "y"}, obs, options);

    std::mt19937 shuffle_rng(7);
    std::shuffle(obs.begin(), obs.end(), shuffle_rng);
    PanelDataset b = PanelDataset::from_observations({"y", "x"}, obs, options);

    CHECK(a == b);
    CHECK(a.year_start() == 1990);
    CHECK(a.year_end() == 2001);
}

TEST_CASE("duplicate observations are rejected by name") {
    std::vector<Observation> obs = {{"A", 2000, "x", 1.0}, {"A", 2000, "x", 2.0}};
    PanelOptions options;
    options.min_obs = 1;
    try {
        PanelDataset::from_observations({"x"}, obs, options);
        FAIL("expected a duplicate-observation error");
    } catch (const DuplicateObservation& ex) {
        const std::string what = ex.what();
        CHECK(what.find("A") != std::string::npos);
        CHECK(what.find("2000") != std::string::npos);
    }
}

TEST_CASE("entities below the observation floor are excluded with a note") {
    std::vector<Observation> obs;
    for (int t = 0; t < 15; ++t) obs.push_back({"LONG1", 1990 + t, "x", double(t)});
    for (int t = 0; t < 15; ++t) obs.push_back({"LONG2", 1990 + t, "x", double(2 * t)});
    for (int t = 0; t < 5; ++t) obs.push_back({"SHORT", 1990 + t, "x", double(t)});

    PanelOptions options;
    options.min_obs = 10;
    PanelDataset p = PanelDataset::from_observations({"x"}, obs, options);

    CHECK(p.n_entities() == 2);
    const auto& names = p.entities();
    CHECK(std::find(names.begin(), names.end(), "SHORT") == names.end());
    bool noted = false;
    for (const auto& note : p.notes())
        if (note.find("SHORT") != std::string::npos) noted = true;
    CHECK(noted);
}

TEST_CASE("series views expose the longest contiguous run") {
    std::vector<Observation> obs;
    for (int t = 0; t < 10; ++t) {
        if (t == 3) continue;  // interior gap
        obs.push_back({"A", 2000 + t, "x", double(t)});
    }
    // second entity keeps the panel viable
    for (int t = 0; t < 10; ++t) obs.push_back({"B", 2000 + t, "x", double(t)});
    PanelOptions options;
    options.min_obs = 1;
    PanelDataset p = PanelDataset::from_observations({"x"}, obs, options);

    auto run = p.series("A", "x");
    REQUIRE(run.has_value());
    CHECK(run->first_year == 2004);  // the six points after the gap beat the three before it
    REQUIRE(run->data.size() == 6);
    for (std::size_t i = 0; i < run->data.size(); ++i)
        CHECK(run->data[i] == doctest::Approx(4.0 + double(i)));

    CHECK(p.observed(p.entity_index("B"), 2003, p.variable_index("x")));
    CHECK_FALSE(p.observed(p.entity_index("A"), 2003, p.variable_index("x")));
    CHECK(p.value(p.entity_index("B"), 2005, p.variable_index("x")) == 5.0);
}

TEST_CASE("derived variables can be added but not overwritten") {
    PanelDataset p = make_panel(testutil::entity_names(2), {"x"},
                                {{{1.0, 2.0, 3.0}}, {{4.0, 5.0, 6.0}}});
    std::vector<std::vector<double>> vals = {{2.0, 4.0, 6.0}, {8.0, 10.0, 12.0}};
    std::vector<std::vector<bool>> mask = {{true, true, true}, {true, true, true}};
    PanelDataset q = p.with_variable("x2", vals, mask);
    CHECK(q.has_variable("x2"));
    auto sv = q.series("E01", "x2");
    CHECK(sv->data[2] == 12.0);
    CHECK_THROWS_AS(p.with_variable("x", vals, mask), InvalidSpec);
}

TEST_CASE("log transformation requires strictly positive values") {
    PanelDataset p = make_panel(testutil::entity_names(2), {"x"},
                                {{{1.0, std::exp(1.0), std::exp(2.0)}}, {{2.0, 4.0, 8.0}}});
    PanelDataset lp = p.with_log_variable("x");
    auto sv = lp.series("E00", "x");
    CHECK(sv->data[0] == doctest::Approx(0.0).epsilon(1e-12));
    CHECK(sv->data[1] == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(sv->data[2] == doctest::Approx(2.0).epsilon(1e-12));

    PanelDataset bad = make_panel(testutil::entity_names(2), {"x"},
                                  {{{1.0, -2.0, 3.0}}, {{2.0, 4.0, 8.0}}});
    CHECK_THROWS_AS(bad.with_log_variable("x"), InvalidSpec);
}

TEST_CASE("entity frames align several variables over a common span") {
    PanelDataset p = make_panel(testutil::entity_names(2), {"a", "b"},
                                {{{1.0, 2.0, 3.0}, {9.0, 8.0, 7.0}},
                                 {{4.0, 5.0, 6.0}, {1.0, 1.0, 1.0}}});
    auto frame = entity_frame(p, "E00", {"a", "b"});
    REQUIRE(frame.has_value());
    CHECK(frame->rows() == 3);
    CHECK(frame->columns.cols() == 2);
    CHECK(frame->columns(0, 0) == 1.0);
    CHECK(frame->columns(2, 1) == 7.0);
    CHECK(frame->first_year == 1980);
}
