#include <cmath>
#include <string>
#include <vector>

#include "doctest.h"
#include "pnact/errors.hpp"
#include "pnact/eval.hpp"

using namespace pnact;

namespace {

std::string blend_scenario() {
    // Weekdays stay in A all day; weekends split A and B evenly.
    return R"({
      "map": {
        "type": "FeatureCollection",
        "features": [
          {"type": "Feature", "properties": {"id": "A", "kind": "polygon"},
           "geometry": {"type": "Polygon", "coordinates": [[[0,0],[1,0],[1,1],[0,1],[0,0]]]}},
          {"type": "Feature", "properties": {"id": "B", "kind": "polygon"},
           "geometry": {"type": "Polygon", "coordinates": [[[6,0],[7,0],[7,1],[6,1],[6,0]]]}},
          {"type": "Feature", "properties": {"id": "s1", "kind": "segment"},
           "geometry": {"type": "LineString", "coordinates": [[1,0.5],[3,0.5]]}},
          {"type": "Feature", "properties": {"id": "s2", "kind": "segment"},
           "geometry": {"type": "LineString", "coordinates": [[3,0.5],[6,0.5]]}}
        ]
      },
      "patterns": [
        {"name": "athome", "day_type": "weekday", "prob": 0.7142857142857143,
         "steps": [{"stay": "A", "mu": 24.0}]},
        {"name": "split", "day_type": "weekend", "prob": 0.2857142857142857,
         "steps": [{"stay": "A", "mu": 11.75}, {"travel": ["s1", "s2"], "mu": 0.5}, {"stay": "B", "mu": 11.75}]}
      ],
      "defaults": {"n": 7, "m": 23, "sigma": 0.0, "spacing": "even", "seed": 5}
    })";
}

TimeUseTable table_of(const std::vector<std::pair<std::string, double>>& cells) {
    TimeUseTable t;
    for (const auto& [id, v] : cells) t.cells[id] = {v, Kind::polygon};
    return t;
}

} // namespace

TEST_CASE("squared error sums run over the id union") {
    const TimeUseTable est = table_of({{"a1", 0.6}, {"a2", 0.4}});
    TruthTable truth{{"a1", 0.5}, {"a3", 0.5}};
    // (0.6-0.5)^2 + (0.4-0)^2 + (0-0.5)^2
    CHECK(squared_error_sum(est, truth) == doctest::Approx(0.01 + 0.16 + 0.25));

    // A perfect match scores zero.
    TruthTable same{{"a1", 0.6}, {"a2", 0.4}};
    CHECK(squared_error_sum(est, same) == doctest::Approx(0.0));
}

TEST_CASE("rmise reference values") {
    // Perfect estimates give zero.
    const TimeUseTable est = table_of({{"a1", 0.5}, {"a2", 0.5}});
    const TruthTable truth{{"a1", 0.5}, {"a2", 0.5}};
    CHECK(rmise({est, est}, {truth, truth}) == doctest::Approx(0.0));

    // One replicate with squared-error sum 0.01 -> 0.1.
    const TimeUseTable off = table_of({{"a1", 0.6}, {"a2", 0.4}});
    TruthTable t2{{"a1", 0.5}, {"a2", 0.5}};
    CHECK(squared_error_sum(off, t2) == doctest::Approx(0.02));
    CHECK(rmise({off}, {t2}) == doctest::Approx(std::sqrt(0.02)));

    // Two replicates with sums 0.01 and 0.03 -> sqrt(0.02).
    const auto stat = rmise_stat({0.01, 0.03});
    CHECK(stat.value == doctest::Approx(std::sqrt(0.02)));
    // Delta method: se(mean) = 0.01, se(rmise) = se(mean) / (2 rmise).
    CHECK(stat.se == doctest::Approx(0.01 / (2.0 * std::sqrt(0.02))));

    const auto perfect = rmise_stat({0.0, 0.0, 0.0});
    CHECK(perfect.value == 0.0);
    CHECK(perfect.se == 0.0);

    const auto single = rmise_stat({0.04});
    CHECK(single.value == doctest::Approx(0.2));
    CHECK(single.se == 0.0); // no spread estimate from one replicate

    CHECK_THROWS_AS(rmise_stat({}), ValidationError);
    CHECK_THROWS_AS(rmise({est}, {}), ValidationError);
}

TEST_CASE("expected truth per day type") {
    const Scenario sc = scenario_from_json_text(blend_scenario());

    const TruthTable wd = expected_truth(sc, "weekday");
    CHECK(wd.at("A") == doctest::Approx(1.0));
    CHECK(wd.count("B") == 0);

    const TruthTable we = expected_truth(sc, "weekend");
    CHECK(we.at("A") == doctest::Approx(11.75 / 24.0));
    CHECK(we.at("B") == doctest::Approx(11.75 / 24.0));
    CHECK(we.at("s1") == doctest::Approx(0.2 / 24.0));
    CHECK(we.at("s2") == doctest::Approx(0.3 / 24.0));
    double total = 0.0;
    for (const auto& [id, v] : we) total += v;
    CHECK(total == doctest::Approx(1.0).epsilon(1e-12));

    CHECK_THROWS_AS(expected_truth(sc, "holiday"), ValidationError);
}

TEST_CASE("analytic truth blends day types over the calendar") {
    const Scenario sc = scenario_from_json_text(blend_scenario());

    // n = 7: 5 weekdays, 2 weekend days.
    const TruthTable t7 = analytic_truth(sc, 7);
    CHECK(t7.at("A") == doctest::Approx((5.0 * 1.0 + 2.0 * 11.75 / 24.0) / 7.0));
    CHECK(t7.at("B") == doctest::Approx(2.0 * (11.75 / 24.0) / 7.0));

    // n = 5: weekdays only.
    const TruthTable t5 = analytic_truth(sc, 5);
    CHECK(t5.at("A") == doctest::Approx(1.0));
    if (t5.count("s1")) CHECK(t5.at("s1") == doctest::Approx(0.0));

    // n = 30 on the full scenario: home dominates, everything sums to one.
    const Scenario full = load_scenario(PNACT_SCENARIO_PATH);
    const TruthTable t30 = analytic_truth(full, 30);
    double total = 0.0;
    for (const auto& [id, v] : t30) total += v;
    CHECK(total == doctest::Approx(1.0).epsilon(1e-9));
    CHECK(t30.at("home") > 0.6);
    CHECK(t30.at("office") > 0.2);

    CHECK_THROWS_AS(analytic_truth(full, 0), ValidationError);
}

TEST_CASE("analytic truth rejects overcommitted patterns") {
    std::string bad = blend_scenario();
    const auto pos = bad.find("\"mu\": 11.75");
    bad.replace(pos, std::string("\"mu\": 11.75").size(), "\"mu\": 30.0");
    // Scenario validation itself may reject; either way the error surfaces
    // as a ValidationError before any truth is produced.
    CHECK_THROWS_AS(
        [&] {
            const Scenario sc = scenario_from_json_text(bad);
            expected_truth(sc, "weekend");
        }(),
        ValidationError);
}

TEST_CASE("log-log slope fitting") {
    // Exact power law y = 3 x^-0.5.
    const std::vector<double> x{4.0, 16.0, 64.0};
    std::vector<double> y;
    for (const double v : x) y.push_back(3.0 / std::sqrt(v));
    CHECK(fit_loglog_slope(x, y) == doctest::Approx(-0.5).epsilon(1e-12));

    // Exact quadratic decay.
    std::vector<double> y2;
    for (const double v : x) y2.push_back(10.0 / (v * v));
    CHECK(fit_loglog_slope(x, y2) == doctest::Approx(-2.0).epsilon(1e-12));

    CHECK_THROWS_AS(fit_loglog_slope({1.0}, {2.0}), ValidationError);
    CHECK_THROWS_AS(fit_loglog_slope({1.0, 2.0}, {0.0, 1.0}), ValidationError);
}

TEST_CASE("comparison grid produces finite, reproducible cells") {
    const Scenario sc = load_scenario(PNACT_SCENARIO_PATH);
    ExperimentGrid grid;
    grid.n_values = {2, 4};
    grid.m_values = {11};
    grid.sigma = 0.05;
    grid.spacing = "even";
    grid.replicates = 3;
    grid.seed = 99;
    grid.threads = 1;

    const auto rows = run_comparison(sc, grid);
    REQUIRE(rows.size() == 2);
    for (const auto& r : rows) {
        CHECK(r.spacing == "even");
        CHECK(r.m == 11);
        CHECK(r.R == 3);
        CHECK(r.naive > 0.0);
        CHECK(r.weighted > 0.0);
        CHECK(r.adjusted > 0.0);
        CHECK(r.se_naive >= 0.0);
        CHECK(r.se_weighted >= 0.0);
        CHECK(std::isfinite(r.naive));
        CHECK(std::isfinite(r.weighted));
        CHECK(std::isfinite(r.adjusted));
    }
    CHECK(rows[0].n == 2);
    CHECK(rows[1].n == 4);

    // Byte-level determinism across runs and thread counts.
    ExperimentGrid grid4 = grid;
    grid4.threads = 4;
    const auto rows4 = run_comparison(sc, grid4);
    REQUIRE(rows4.size() == rows.size());
    for (std::size_t i = 0; i < rows.size(); ++i) {
        CHECK(rows[i].naive == rows4[i].naive);
        CHECK(rows[i].weighted == rows4[i].weighted);
        CHECK(rows[i].adjusted == rows4[i].adjusted);
        CHECK(rows[i].se_weighted == rows4[i].se_weighted);
    }

    ExperimentGrid empty = grid;
    empty.n_values.clear();
    CHECK_THROWS_AS(run_comparison(sc, empty), ValidationError);
}

TEST_CASE("more observations shrink the weighted error on this design") {
    const Scenario sc = load_scenario(PNACT_SCENARIO_PATH);
    ExperimentGrid grid;
    grid.n_values = {3};
    grid.m_values = {7, 239};
    grid.sigma = 0.02;
    grid.spacing = "even";
    grid.replicates = 8;
    grid.seed = 4;
    const auto rows = run_comparison(sc, grid);
    REQUIRE(rows.size() == 2);
    CHECK(rows[1].weighted < rows[0].weighted);
}
