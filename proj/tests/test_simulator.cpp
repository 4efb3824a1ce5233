#include <algorithm>
#include <cmath>
#include <map>
#include <set>
#include <string>
#include <vector>

#include "doctest.h"
#include "pnact/errors.hpp"
#include "pnact/geometry.hpp"
#include "pnact/rng.hpp"
#include "pnact/simulator.hpp"

using namespace pnact;

namespace {

// Minimal two-place world: square A at x in [0,1], square B at x in [6,7],
// joined by s1 (length 2) and s2 (length 3).
std::string mini_map() {
    return R"({
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
    })";
}

// One weekday and one weekend pattern with identical steps:
// A for 11.75 h, 0.5 h on the road, absorb in B.
std::string mini_scenario() {
    return std::string(R"({
      "map": )") + mini_map() + R"(,
      "patterns": [
        {"name": "commute-wd", "day_type": "weekday", "prob": 0.7142857142857143,
         "steps": [
           {"stay": "A", "mu": 11.75},
           {"travel": ["s1", "s2"], "mu": 0.5},
           {"stay": "B", "mu": 11.75}
         ]},
        {"name": "commute-we", "day_type": "weekend", "prob": 0.2857142857142857,
         "steps": [
           {"stay": "A", "mu": 11.75},
           {"travel": ["s1", "s2"], "mu": 0.5},
           {"stay": "B", "mu": 11.75}
         ]}
      ],
      "defaults": {"n": 7, "m": 23, "sigma": 0.0, "spacing": "even", "seed": 5}
    })";
}

} // namespace

TEST_CASE("scenario loads and validates") {
    const Scenario sc = scenario_from_json_text(mini_scenario());
    CHECK(sc.entities.size() == 4);
    CHECK(sc.patterns.size() == 2);
    CHECK(sc.defaults.m == 23);
    REQUIRE(sc.find("A").kind == Kind::polygon);
    CHECK(sc.index_of("A") == 0);
    CHECK(sc.patterns[0].name == "commute-wd");
    CHECK_THROWS_AS(sc.index_of("nowhere"), ValidationError);

    const Scenario full = load_scenario(PNACT_SCENARIO_PATH);
    CHECK(full.patterns.size() == 5);
    double total = 0.0;
    for (const auto& p : full.patterns) total += p.prob;
    CHECK(total == doctest::Approx(1.0).epsilon(1e-9));
}

TEST_CASE("scenario validation rejects broken inputs") {
    // Probabilities must sum to one.
    std::string bad = mini_scenario();
    const auto pos = bad.find("0.7142857142857143");
    bad.replace(pos, std::string("0.7142857142857143").size(), "0.9");
    CHECK_THROWS_AS(scenario_from_json_text(bad), ValidationError);

    // Unknown day types, unknown places and broken route chains all fail.
    std::string wrong_type = mini_scenario();
    const auto tp = wrong_type.find("weekend");
    wrong_type.replace(tp, 7, "holiday");
    CHECK_THROWS_AS(scenario_from_json_text(wrong_type), ValidationError);

    std::string wrong_place = mini_scenario();
    const auto pp = wrong_place.find("\"stay\": \"B\"");
    REQUIRE(pp != std::string::npos);
    wrong_place.replace(pp, std::string("\"stay\": \"B\"").size(), "\"stay\": \"C\"");
    CHECK_THROWS_AS(scenario_from_json_text(wrong_place), ValidationError);

    // A route over segments that do not share an endpoint cannot chain.
    const std::string broken_route = R"({
      "map": {
        "type": "FeatureCollection",
        "features": [
          {"type": "Feature", "properties": {"id": "A", "kind": "polygon"},
           "geometry": {"type": "Polygon", "coordinates": [[[0,0],[1,0],[1,1],[0,1],[0,0]]]}},
          {"type": "Feature", "properties": {"id": "s1", "kind": "segment"},
           "geometry": {"type": "LineString", "coordinates": [[1,0.5],[3,0.5]]}},
          {"type": "Feature", "properties": {"id": "s9", "kind": "segment"},
           "geometry": {"type": "LineString", "coordinates": [[4,0.5],[6,0.5]]}}
        ]
      },
      "patterns": [
        {"name": "p-wd", "day_type": "weekday", "prob": 0.7142857142857143,
         "steps": [{"stay": "A", "mu": 3.0}, {"travel": ["s1", "s9"], "mu": 0.5}, {"stay": "A", "mu": 24.0}]},
        {"name": "p-we", "day_type": "weekend", "prob": 0.2857142857142857,
         "steps": [{"stay": "A", "mu": 24.0}]}
      ],
      "defaults": {"n": 1, "m": 5, "sigma": 0.0, "spacing": "even", "seed": 1}
    })";
    CHECK_THROWS_AS(scenario_from_json_text(broken_route), ValidationError);
}

TEST_CASE("day types follow the 5+2 calendar") {
    for (int d = 1; d <= 5; ++d) CHECK(day_type_for(d) == "weekday");
    CHECK(day_type_for(6) == "weekend");
    CHECK(day_type_for(7) == "weekend");
    CHECK(day_type_for(8) == "weekday");
    CHECK(day_type_for(13) == "weekend");
    CHECK(day_type_for(15) == "weekday");
}

TEST_CASE("pattern sampling matches the conditional distribution") {
    const Scenario sc = load_scenario(PNACT_SCENARIO_PATH);
    Rng rng(2718);
    const int draws = 20000;
    std::map<std::size_t, int> weekday_counts, weekend_counts;
    for (int i = 0; i < draws; ++i) {
        weekday_counts[sample_day_pattern("weekday", sc, rng)]++;
        weekend_counts[sample_day_pattern("weekend", sc, rng)]++;
    }
    // Weekday: patterns 1 and 2 in ratio 15:5 -> 0.75 / 0.25.
    const double p1 = weekday_counts[0] / static_cast<double>(draws);
    const double p2 = weekday_counts[1] / static_cast<double>(draws);
    CHECK(std::abs(p1 - 0.75) < 5.0 * std::sqrt(0.75 * 0.25 / draws));
    CHECK(std::abs(p2 - 0.25) < 5.0 * std::sqrt(0.25 * 0.75 / draws));
    CHECK(weekday_counts.count(2) == 0); // weekend patterns never on weekdays

    // Weekend: patterns 3, 4, 5 in ratio 4:1:3 over 8.
    const double q3 = weekend_counts[2] / static_cast<double>(draws);
    const double q4 = weekend_counts[3] / static_cast<double>(draws);
    const double q5 = weekend_counts[4] / static_cast<double>(draws);
    CHECK(std::abs(q3 - 0.5) < 5.0 * std::sqrt(0.5 * 0.5 / draws));
    CHECK(std::abs(q4 - 0.125) < 5.0 * std::sqrt(0.125 * 0.875 / draws));
    CHECK(std::abs(q5 - 0.375) < 5.0 * std::sqrt(0.375 * 0.625 / draws));
}

TEST_CASE("durations truncate strictly inside (mu-q, mu+q) with the right mean") {
    const Scenario sc = load_scenario(PNACT_SCENARIO_PATH);
    const PatternSpec& p1 = sc.patterns[0];
    REQUIRE(p1.steps[0].mu == doctest::Approx(9.0));
    REQUIRE(p1.steps[0].q == doctest::Approx(0.5));

    Rng rng(31);
    double sum_first = 0.0;
    const int reps = 4000;
    for (int i = 0; i < reps; ++i) {
        const auto d = sample_durations(p1, rng);
        REQUIRE(d.size() == p1.steps.size());
        // Non-final steps stay strictly inside their truncation windows.
        for (std::size_t s = 0; s + 1 < p1.steps.size(); ++s) {
            const auto& st = p1.steps[s];
            const double hours = d[s] * 24.0;
            if (st.eta > 0.0) {
                CHECK(hours > st.mu - st.q);
                CHECK(hours < st.mu + st.q);
            } else {
                CHECK(hours == doctest::Approx(st.mu).epsilon(1e-12));
            }
        }
        // The whole day is accounted for.
        double total = 0.0;
        for (const double v : d) total += v;
        CHECK(total == doctest::Approx(1.0).epsilon(1e-12));
        CHECK(d.back() >= 0.0);
        sum_first += d[0] * 24.0;
    }
    // Symmetric truncation keeps the mean at mu: se ~ 0.15/sqrt(reps).
    CHECK(std::abs(sum_first / reps - 9.0) < 5.0 * 0.15 / std::sqrt(static_cast<double>(reps)));
}

TEST_CASE("negative remainders trigger day resampling, impossible days throw") {
    // mu sums to 23.8 with q = 2.5: some draws exceed 24 and must be redone.
    const std::string risky = R"({
      "map": )" + mini_map() + R"(,
      "patterns": [
        {"name": "long-wd", "day_type": "weekday", "prob": 0.7142857142857143,
         "steps": [{"stay": "A", "mu": 23.8, "eta": 1.0, "q": 2.5}, {"stay": "B", "mu": 11.75}]},
        {"name": "long-we", "day_type": "weekend", "prob": 0.2857142857142857,
         "steps": [{"stay": "A", "mu": 23.8, "eta": 1.0, "q": 2.5}, {"stay": "B", "mu": 11.75}]}
      ],
      "defaults": {"n": 1, "m": 5, "sigma": 0.0, "spacing": "even", "seed": 1}
    })";
    const Scenario sc = scenario_from_json_text(risky);
    Rng rng(8);
    int resamples = 0;
    for (int i = 0; i < 500; ++i) {
        const auto d = sample_durations(sc.patterns[0], rng, &resamples);
        CHECK(d.back() >= 0.0);
    }
    CHECK(resamples > 0);

    // A deterministic overrun can never produce a feasible day.
    const std::string impossible = R"({
      "map": )" + mini_map() + R"(,
      "patterns": [
        {"name": "over-wd", "day_type": "weekday", "prob": 0.7142857142857143,
         "steps": [{"stay": "A", "mu": 25.0}, {"stay": "B", "mu": 11.75}]},
        {"name": "over-we", "day_type": "weekend", "prob": 0.2857142857142857,
         "steps": [{"stay": "A", "mu": 25.0}, {"stay": "B", "mu": 11.75}]}
      ],
      "defaults": {"n": 1, "m": 5, "sigma": 0.0, "spacing": "even", "seed": 1}
    })";
    const Scenario sc2 = scenario_from_json_text(impossible);
    Rng rng2(9);
    CHECK_THROWS_AS(sample_durations(sc2.patterns[0], rng2), InfeasibleError);
}

TEST_CASE("route polylines chain with consistent orientation") {
    const Scenario sc = scenario_from_json_text(mini_scenario());
    const RoutePath rp = route_polyline(sc, {"s1", "s2"});
    CHECK(rp.total == doctest::Approx(5.0));
    REQUIRE(rp.seg_len.size() == 2);
    CHECK(rp.seg_len[0] == doctest::Approx(2.0));
    CHECK(rp.seg_len[1] == doctest::Approx(3.0));
    // Shared junction (3, 0.5) appears once.
    REQUIRE(rp.pts.size() == 3);
    CHECK(rp.pts.front().x == doctest::Approx(1.0));
    CHECK(rp.pts.back().x == doctest::Approx(6.0));

    // Reversed route flips the orientation.
    const RoutePath back = route_polyline(sc, {"s2", "s1"});
    CHECK(back.pts.front().x == doctest::Approx(6.0));
    CHECK(back.pts.back().x == doctest::Approx(1.0));

    CHECK_THROWS_AS(route_polyline(sc, {"s1", "missing"}), ValidationError);
}

TEST_CASE("schedules tile the day exactly") {
    const Scenario sc = scenario_from_json_text(mini_scenario());
    Rng rng(44);
    const DaySchedule sched = build_schedule(sc, 1, "weekday", 0, rng);
    REQUIRE(sched.items.size() == 3);
    CHECK(sched.items[0].t0 == 0.0);
    for (std::size_t i = 1; i < sched.items.size(); ++i)
        CHECK(sched.items[i].t0 == doctest::Approx(sched.items[i - 1].t1));
    CHECK(sched.items.back().t1 == 1.0); // exact, not approximate
    CHECK(sched.items[0].t1 == doctest::Approx(11.75 / 24.0));
    CHECK(sched.items[1].kind == StepKind::travel);
    CHECK(sched.items[1].path_len == doctest::Approx(5.0));
}

TEST_CASE("realized positions stay inside the scheduled geometry") {
    const Scenario sc = scenario_from_json_text(mini_scenario());
    Rng rng(45);
    const DaySchedule sched = build_schedule(sc, 1, "weekday", 0, rng);

    const auto& stay = sched.items[0];
    const auto& travel = sched.items[1];
    for (int k = 0; k < 200; ++k) {
        const double t = stay.t0 + (stay.t1 - stay.t0) * (k + 0.5) / 200.0;
        const Point2D p = realize_position(sc, sched, t, rng);
        CHECK(p.x >= 0.0);
        CHECK(p.x <= 1.0);
        CHECK(p.y >= 0.0);
        CHECK(p.y <= 1.0);
    }
    // Constant speed: the midpoint of the travel window sits at arc length 2.5.
    const double tmid = 0.5 * (travel.t0 + travel.t1);
    const Point2D mid = realize_position(sc, sched, tmid, rng);
    CHECK(mid.x == doctest::Approx(3.5));
    CHECK(mid.y == doctest::Approx(0.5));
    // Quarter point: arc length 1.25 lies on s1.
    const double tq = travel.t0 + 0.25 * (travel.t1 - travel.t0);
    const Point2D quarter = realize_position(sc, sched, tq, rng);
    CHECK(quarter.x == doctest::Approx(2.25));

    CHECK_THROWS_AS(realize_position(sc, sched, -0.1, rng), ValidationError);
    CHECK_THROWS_AS(realize_position(sc, sched, 1.1, rng), ValidationError);
}

TEST_CASE("ground truth: stays, length-proportional travel, crossings") {
    const Scenario sc = scenario_from_json_text(mini_scenario());
    Rng rng(46);
    const DaySchedule sched = build_schedule(sc, 1, "weekday", 0, rng);
    const DayTruth truth = ground_truth(sc, sched);

    // 0.5 h of travel over lengths 2 and 3 splits into 0.2 h and 0.3 h.
    CHECK(truth.T.at("A") == doctest::Approx(11.75 / 24.0));
    CHECK(truth.T.at("s1") == doctest::Approx(0.2 / 24.0));
    CHECK(truth.T.at("s2") == doctest::Approx(0.3 / 24.0));
    CHECK(truth.T.at("B") == doctest::Approx(11.75 / 24.0));

    double total = 0.0;
    for (const auto& [id, v] : truth.T) total += v;
    CHECK(total == doctest::Approx(1.0).epsilon(1e-12));

    // Visits: one each; crossings: A starts the day (1), s1, s2 interior (2),
    // B ends the day (1).
    CHECK(truth.visits.at("A") == 1);
    CHECK(truth.crossings.at("A") == 1);
    CHECK(truth.crossings.at("s1") == 2);
    CHECK(truth.crossings.at("s2") == 2);
    CHECK(truth.crossings.at("B") == 1);

    REQUIRE(truth.intervals.size() == 4);
    CHECK(truth.intervals.front().entity == "A");
    CHECK(truth.intervals.back().entity == "B");
    CHECK(truth.intervals.back().t1 == 1.0);
}

TEST_CASE("an all-day pattern has one visit and no crossings") {
    const std::string lazy = R"({
      "map": )" + mini_map() + R"(,
      "patterns": [
        {"name": "home-wd", "day_type": "weekday", "prob": 0.7142857142857143,
         "steps": [{"stay": "A", "mu": 24.0}]},
        {"name": "home-we", "day_type": "weekend", "prob": 0.2857142857142857,
         "steps": [{"stay": "A", "mu": 24.0}]}
      ],
      "defaults": {"n": 1, "m": 5, "sigma": 0.0, "spacing": "even", "seed": 1}
    })";
    const Scenario sc = scenario_from_json_text(lazy);
    Rng rng(47);
    const DaySchedule sched = build_schedule(sc, 1, "weekday", 0, rng);
    const DayTruth truth = ground_truth(sc, sched);
    CHECK(truth.T.at("A") == doctest::Approx(1.0));
    CHECK(truth.visits.at("A") == 1);
    CHECK(truth.crossings.at("A") == 0);
    REQUIRE(truth.intervals.size() == 1);
}

TEST_CASE("even timestamps are the interior grid") {
    const auto t3 = gen_timestamps_even(3);
    REQUIRE(t3.size() == 3);
    CHECK(t3[0] == doctest::Approx(0.25));
    CHECK(t3[1] == doctest::Approx(0.5));
    CHECK(t3[2] == doctest::Approx(0.75));
    CHECK_THROWS_AS(gen_timestamps_even(1), ValidationError);
    CHECK_THROWS_AS(gen_timestamps_even(0), ValidationError);
}

TEST_CASE("reference days look like human sampling patterns") {
    Rng rng(48);
    for (int k = 0; k < 20; ++k) {
        const auto ref = make_reference_day(rng);
        CHECK(ref.size() >= 150);
        CHECK(ref.size() <= 600);
        CHECK(std::is_sorted(ref.begin(), ref.end()));
        int night = 0;
        for (const double t : ref) {
            CHECK(t >= 0.0);
            CHECK(t <= 1.0);
            if (t < 0.27 || t > 0.95) ++night;
        }
        // ~6% night mass; allow generous binomial slack.
        const double frac = night / static_cast<double>(ref.size());
        CHECK(frac > 0.0);
        CHECK(frac < 0.20);
    }
}

TEST_CASE("realistic timestamps subsample or augment to exactly m") {
    Rng rng(49);
    const auto ref = make_reference_day(rng);

    // m below the reference size: a strict subsample.
    const int m_small = 40;
    const auto sub = gen_timestamps_realistic(m_small, ref, rng);
    REQUIRE(sub.size() == static_cast<std::size_t>(m_small));
    CHECK(std::is_sorted(sub.begin(), sub.end()));
    for (std::size_t i = 1; i < sub.size(); ++i) CHECK(sub[i] > sub[i - 1]);
    std::set<double> refset(ref.begin(), ref.end());
    for (const double t : sub) CHECK(refset.count(t) == 1);

    // m above the reference size: keep everything, augment by KDE.
    const int m_big = static_cast<int>(ref.size()) + 200;
    const auto aug = gen_timestamps_realistic(m_big, ref, rng);
    REQUIRE(aug.size() == static_cast<std::size_t>(m_big));
    CHECK(std::is_sorted(aug.begin(), aug.end()));
    for (std::size_t i = 1; i < aug.size(); ++i) {
        CHECK(aug[i] > aug[i - 1]);
        CHECK(aug[i] <= 1.0);
    }
    CHECK(aug.front() >= 0.0);

    CHECK_THROWS_AS(gen_timestamps_realistic(10, {}, rng), ValidationError);
}

TEST_CASE("noise is isotropic with the requested scale") {
    Rng rng(50);
    std::vector<Point2D> pts(20000, {1.0, 2.0});
    add_noise(pts, 0.3, rng);
    double mx = 0.0, my = 0.0, vxx = 0.0, vyy = 0.0, vxy = 0.0;
    for (const auto& p : pts) {
        mx += p.x - 1.0;
        my += p.y - 2.0;
    }
    mx /= pts.size();
    my /= pts.size();
    for (const auto& p : pts) {
        const double dx = p.x - 1.0 - mx, dy = p.y - 2.0 - my;
        vxx += dx * dx;
        vyy += dy * dy;
        vxy += dx * dy;
    }
    vxx /= pts.size();
    vyy /= pts.size();
    vxy /= pts.size();
    CHECK(std::abs(mx) < 5.0 * 0.3 / std::sqrt(20000.0));
    CHECK(std::abs(my) < 5.0 * 0.3 / std::sqrt(20000.0));
    CHECK(vxx == doctest::Approx(0.09).epsilon(0.05));
    CHECK(vyy == doctest::Approx(0.09).epsilon(0.05));
    CHECK(std::abs(vxy) < 0.005);

    // sigma = 0 leaves points untouched; negative sigma is invalid.
    std::vector<Point2D> still{{3.0, 4.0}};
    add_noise(still, 0.0, rng);
    CHECK(still[0].x == 3.0);
    CHECK(still[0].y == 4.0);
    CHECK_THROWS_AS(add_noise(still, -0.1, rng), ValidationError);
}

TEST_CASE("observation counting assigns each timestamp to its interval") {
    const Scenario sc = scenario_from_json_text(mini_scenario());
    Rng rng(51);
    const DaySchedule sched = build_schedule(sc, 1, "weekday", 0, rng);
    DayTruth truth = ground_truth(sc, sched);
    // One observation per interval midpoint, plus the day's endpoints.
    std::vector<double> t;
    t.push_back(0.0);
    for (const auto& v : truth.intervals) t.push_back(0.5 * (v.t0 + v.t1));
    t.push_back(1.0);
    std::sort(t.begin(), t.end());
    count_observations(truth, t);
    int total = 0;
    for (const auto& v : truth.intervals) total += v.observations;
    CHECK(total == static_cast<int>(t.size()));
    CHECK(truth.intervals.front().observations >= 2); // midpoint + t=0
    CHECK(truth.intervals.back().observations >= 2);  // midpoint + t=1
}

TEST_CASE("studies are reproducible and thread-count independent") {
    const Scenario sc = load_scenario(PNACT_SCENARIO_PATH);
    const SimStudy a = simulate_study(sc, 6, 37, 0.05, "even", 123, 0, 1);
    const SimStudy b = simulate_study(sc, 6, 37, 0.05, "even", 123, 0, 1);
    const SimStudy c = simulate_study(sc, 6, 37, 0.05, "even", 123, 0, 4);
    REQUIRE(a.days.size() == 6);
    for (std::size_t d = 0; d < a.days.size(); ++d) {
        REQUIRE(a.days[d].gps.t.size() == 37);
        for (std::size_t j = 0; j < a.days[d].gps.t.size(); ++j) {
            CHECK(a.days[d].gps.t[j] == b.days[d].gps.t[j]);
            CHECK(a.days[d].gps.pts[j].x == b.days[d].gps.pts[j].x);
            CHECK(a.days[d].gps.pts[j].x == c.days[d].gps.pts[j].x);
            CHECK(a.days[d].gps.pts[j].y == c.days[d].gps.pts[j].y);
        }
        CHECK(a.days[d].schedule.pattern == c.days[d].schedule.pattern);
    }

    // Different replicate indices give different data from the same seed.
    const SimStudy r1 = simulate_study(sc, 6, 37, 0.05, "even", 123, 1, 1);
    bool differs = false;
    for (std::size_t d = 0; d < a.days.size() && !differs; ++d)
        for (std::size_t j = 0; j < a.days[d].gps.pts.size() && !differs; ++j)
            differs = a.days[d].gps.pts[j].x != r1.days[d].gps.pts[j].x;
    CHECK(differs);
}

TEST_CASE("noise-free observations sit inside their scheduled entity") {
    const Scenario sc = load_scenario(PNACT_SCENARIO_PATH);
    const SimStudy study = simulate_study(sc, 10, 97, 0.0, "even", 777, 0, 1);
    PNSpace pn(sc.entities);
    int checked = 0;
    for (const auto& day : study.days) {
        for (std::size_t j = 0; j < day.gps.t.size(); ++j) {
            const double t = day.gps.t[j];
            // Find the truth interval containing t.
            for (const auto& v : day.truth.intervals) {
                if (t < v.t0 || t >= v.t1) continue;
                const auto idx = pn.find(v.entity);
                REQUIRE(idx.has_value());
                CHECK(distance_point_to_entity(day.gps.pts[j], pn.entity(*idx)) <
                      1e-9);
                ++checked;
                break;
            }
        }
    }
    CHECK(checked > 900);
}

TEST_CASE("study truth totals one per day and diagnostics track empty visits") {
    const Scenario sc = load_scenario(PNACT_SCENARIO_PATH);
    const SimStudy study = simulate_study(sc, 14, 61, 0.1, "even", 31, 0, 2);
    for (const auto& day : study.days) {
        double total = 0.0;
        for (const auto& [id, v] : day.truth.T) total += v;
        CHECK(total == doctest::Approx(1.0).epsilon(1e-12));

        int from_intervals = 0;
        for (const auto& v : day.truth.intervals) from_intervals += v.observations;
        CHECK(from_intervals == static_cast<int>(day.gps.t.size()));
    }
}
