#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <vector>

#include "helpers.hpp"
#include "panelbreak/cointegration.hpp"
#include "panelbreak/errors.hpp"
#include "panelbreak/rng.hpp"
#include "panelbreak/stats.hpp"
#include "panelbreak/synth.hpp"
#include "panelbreak/unit_root.hpp"

using namespace panelbreak;

namespace {

const std::vector<std::string> kVars = {"co2", "energy", "gdp", "pop"};

PanelDataset scaled_copy(const PanelDataset& p, double factor) {
    std::vector<Observation> obs;
    for (std::size_t e = 0; e < p.n_entities(); ++e) {
        for (const auto& v : p.variables()) {
            auto sv = p.series(p.entities()[e], v);
            for (std::size_t t = 0; t < sv->data.size(); ++t) {
                obs.push_back({p.entities()[e], sv->first_year + static_cast<int>(t), v,
                               factor * sv->data[t]});
            }
        }
    }
    PanelOptions options;
    options.min_obs = 10;
    return PanelDataset::from_observations(p.variables(), obs, options);
}

}  // namespace

TEST_CASE("an exact long-run relation leaves zero first-stage residuals") {
    SplitRng rng(501);
    std::vector<std::vector<std::vector<double>>> data(2);
    for (auto& e : data) {
        e.resize(4);
        for (int v = 1; v < 4; ++v) {
            e[static_cast<std::size_t>(v)].resize(40);
            double level = 0.0;
            for (auto& x : e[static_cast<std::size_t>(v)]) {
                level += rng.normal();
                x = level;
            }
        }
        e[0].resize(40);
        for (std::size_t t = 0; t < 40; ++t)
            e[0][t] = 3.0 + 2.0 * e[1][t] - e[2][t] + 0.5 * e[3][t];
    }
    PanelDataset p = testutil::make_panel(testutil::entity_names(2), kVars, data);
    auto frame = entity_frame(p, "E00", kVars);
    REQUIRE(frame.has_value());
    std::vector<double> resid =
        entity_cointegrating_residuals(*frame, stats::Deterministic::constant);
    REQUIRE(resid.size() == 40);
    for (double r : resid) CHECK(std::fabs(r) < 1e-10);
}

TEST_CASE("first-stage residuals of linked entities are stationary") {
    int total = 0, rejected = 0;
    for (int r = 0; r < 50; ++r) {
        DgpSpec d = default_spec(DgpKind::cointegrated);
        d.n_entities = 10;
        d.n_periods = 200;
        d.seed = 640000u + static_cast<unsigned>(r);
        PanelDataset p = generate(d);
        for (const auto& entity : p.entities()) {
            auto frame = entity_frame(p, entity, kVars);
            std::vector<double> resid =
                entity_cointegrating_residuals(*frame, stats::Deterministic::constant);
            SeriesView s;
            s.entity = entity;
            s.variable = "resid";
            s.data = resid;
            s.first_year = frame->first_year;
            if (adf_stat(s, stats::Deterministic::none).p < 0.05) ++rejected;
            ++total;
        }
    }
    CHECK(double(rejected) / total >= 0.90);
}

TEST_CASE("independent walks rarely pass the residual-based battery") {
    int panel_adf_rej = 0, group_adf_rej = 0;
    const int reps = 200;
    for (int r = 0; r < reps; ++r) {
        DgpSpec d = default_spec(DgpKind::independent_walks);
        d.n_entities = 20;
        d.n_periods = 200;
        d.seed = 650000u + static_cast<unsigned>(r);
        PanelDataset p = generate(d);
        PedroniResult ped =
            pedroni_tests(p, "co2", {"energy", "gdp", "pop"}, stats::Deterministic::constant);
        if (ped.rows[static_cast<int>(PedroniStat::panel_adf)].reject_5pct) ++panel_adf_rej;
        if (ped.rows[static_cast<int>(PedroniStat::group_adf)].reject_5pct) ++group_adf_rej;
    }
    CHECK(double(panel_adf_rej) / reps <= 0.15);
    CHECK(double(group_adf_rej) / reps <= 0.15);
}

TEST_CASE("every battery statistic holds its size on independent walks") {
    int rej[7] = {0, 0, 0, 0, 0, 0, 0};
    const int reps = 500;
    for (int r = 0; r < reps; ++r) {
        DgpSpec d = default_spec(DgpKind::independent_walks);
        d.n_entities = 20;
        d.n_periods = 100;
        d.seed = 300000u + static_cast<unsigned>(r);
        PanelDataset p = generate(d);
        PedroniResult ped =
            pedroni_tests(p, "co2", {"energy", "gdp", "pop"}, stats::Deterministic::constant);
        for (int k = 0; k < 7; ++k)
            if (ped.rows[static_cast<std::size_t>(k)].reject_5pct) ++rej[k];
    }
    for (int k = 0; k < 7; ++k) {
        const double rate = double(rej[k]) / reps;
        CHECK(rate >= 0.02);
        CHECK(rate <= 0.10);
    }
}

TEST_CASE("the t-type statistics detect a genuine common relation") {
    int panel_pp_rej = 0, group_pp_rej = 0;
    const int reps = 500;
    for (int r = 0; r < reps; ++r) {
        DgpSpec d = default_spec(DgpKind::cointegrated);
        d.n_entities = 20;
        d.n_periods = 100;
        d.seed = 310000u + static_cast<unsigned>(r);
        PanelDataset p = generate(d);
        PedroniResult ped =
            pedroni_tests(p, "co2", {"energy", "gdp", "pop"}, stats::Deterministic::constant);
        if (ped.rows[static_cast<int>(PedroniStat::panel_pp)].reject_5pct) ++panel_pp_rej;
        if (ped.rows[static_cast<int>(PedroniStat::group_pp)].reject_5pct) ++group_pp_rej;
    }
    CHECK(double(panel_pp_rej) / reps >= 0.80);
    CHECK(double(group_pp_rej) / reps >= 0.80);
}

TEST_CASE("jointly rescaling the panel leaves the ratio statistics unchanged") {
    DgpSpec d = default_spec(DgpKind::cointegrated);
    d.n_entities = 15;
    d.n_periods = 80;
    d.seed = 777;
    PanelDataset p = generate(d);
    PanelDataset q = scaled_copy(p, 2.5);

    PedroniResult a =
        pedroni_tests(p, "co2", {"energy", "gdp", "pop"}, stats::Deterministic::constant);
    PedroniResult b =
        pedroni_tests(q, "co2", {"energy", "gdp", "pop"}, stats::Deterministic::constant);
    for (int k = 1; k < 7; ++k) {  // every statistic past the variance-ratio entry
        CHECK(std::fabs(a.rows[static_cast<std::size_t>(k)].raw -
                        b.rows[static_cast<std::size_t>(k)].raw) < 1e-8);
        CHECK(std::fabs(a.rows[static_cast<std::size_t>(k)].z -
                        b.rows[static_cast<std::size_t>(k)].z) < 1e-8);
    }
    CHECK(a.n_rejections == b.n_rejections);
    CHECK(a.decision_cointegrated == b.decision_cointegrated);
}

TEST_CASE("observation order does not change the battery") {
    DgpSpec d = default_spec(DgpKind::cointegrated);
    d.n_entities = 12;
    d.n_periods = 70;
    d.seed = 778;
    PanelDataset p = generate(d);

    // reload through a rebuilt observation list in reversed order
    std::vector<Observation> obs;
    for (std::size_t e = 0; e < p.n_entities(); ++e) {
        for (const auto& v : p.variables()) {
            auto sv = p.series(p.entities()[e], v);
            for (std::size_t t = 0; t < sv->data.size(); ++t)
                obs.push_back({p.entities()[e], sv->first_year + static_cast<int>(t), v,
                               sv->data[t]});
        }
    }
    std::reverse(obs.begin(), obs.end());
    PanelOptions options;
    options.min_obs = 10;
    PanelDataset q = PanelDataset::from_observations(p.variables(), obs, options);
    REQUIRE(p == q);

    PedroniResult a =
        pedroni_tests(p, "co2", {"energy", "gdp", "pop"}, stats::Deterministic::constant);
    PedroniResult b =
        pedroni_tests(q, "co2", {"energy", "gdp", "pop"}, stats::Deterministic::constant);
    for (int k = 0; k < 7; ++k) {
        CHECK(a.rows[static_cast<std::size_t>(k)].raw ==
              b.rows[static_cast<std::size_t>(k)].raw);
        CHECK(a.rows[static_cast<std::size_t>(k)].z == b.rows[static_cast<std::size_t>(k)].z);
    }
}

TEST_CASE("a half-linked panel splits the battery without a majority") {
    const unsigned seed = 420001;
    DgpSpec dc = default_spec(DgpKind::cointegrated);
    dc.n_entities = 10;
    dc.n_periods = 100;
    dc.seed = seed;
    DgpSpec dw = default_spec(DgpKind::independent_walks);
    dw.n_entities = 10;
    dw.n_periods = 100;
    dw.seed = seed + 500;
    PanelDataset pc = generate(dc);
    PanelDataset pw = generate(dw);

    std::vector<Observation> obs;
    auto append = [&obs](const PanelDataset& p, const std::string& prefix) {
        for (std::size_t e = 0; e < p.n_entities(); ++e) {
            for (const auto& v : p.variables()) {
                auto sv = p.series(p.entities()[e], v);
                for (std::size_t t = 0; t < sv->data.size(); ++t)
                    obs.push_back({prefix + p.entities()[e],
                                   sv->first_year + static_cast<int>(t), v, sv->data[t]});
            }
        }
    };
    append(pc, "C");
    append(pw, "W");
    PanelOptions options;
    options.min_obs = 10;
    PanelDataset mixed = PanelDataset::from_observations(pc.variables(), obs, options);

    PedroniResult ped =
        pedroni_tests(mixed, "co2", {"energy", "gdp", "pop"}, stats::Deterministic::constant);
    CHECK(ped.n_rejections > 0);
    CHECK(ped.n_rejections < 7);
    CHECK_FALSE(ped.decision_cointegrated);
    CHECK(ped.n_entities == 20);
    CHECK(ped.m_regressors == 3);
}

TEST_CASE("battery reports are internally consistent") {
    DgpSpec d = default_spec(DgpKind::cointegrated);
    d.n_entities = 15;
    d.n_periods = 90;
    d.seed = 779;
    PanelDataset p = generate(d);
    PedroniResult ped =
        pedroni_tests(p, "co2", {"energy", "gdp", "pop"}, stats::Deterministic::constant);
    REQUIRE(ped.rows.size() == 7);
    const PedroniStat expected[7] = {PedroniStat::panel_v,   PedroniStat::panel_rho,
                                     PedroniStat::panel_pp,  PedroniStat::panel_adf,
                                     PedroniStat::group_rho, PedroniStat::group_pp,
                                     PedroniStat::group_adf};
    int n_rej = 0;
    for (int k = 0; k < 7; ++k) {
        const auto& row = ped.rows[static_cast<std::size_t>(k)];
        CHECK(row.stat == expected[k]);
        CHECK(row.p_value >= 0.0);
        CHECK(row.p_value <= 1.0);
        CHECK(row.reject_5pct == (row.p_value < 0.05));
        if (row.reject_5pct) ++n_rej;
    }
    CHECK(ped.n_rejections == n_rej);
    CHECK(ped.decision_cointegrated == (n_rej >= 4));
}

TEST_CASE("the battery refuses degenerate panels") {
    std::vector<Observation> obs;
    for (int t = 0; t < 60; ++t) {
        for (const auto& v : kVars) obs.push_back({"ONLY", 1950 + t, v, double(t) + 0.1});
    }
    PanelOptions options;
    options.min_obs = 10;
    PanelDataset single = PanelDataset::from_observations(kVars, obs, options);
    CHECK_THROWS_AS(
        pedroni_tests(single, "co2", {"energy", "gdp", "pop"}, stats::Deterministic::constant),
        InsufficientEntities);

    DgpSpec d = default_spec(DgpKind::cointegrated);
    d.seed = 3;
    PanelDataset p = generate(d);
    CHECK_THROWS_AS(pedroni_tests(p, "nope", {"energy"}, stats::Deterministic::constant),
                    UnknownVariable);
}
