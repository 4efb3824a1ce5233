#pragma once
#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "pnact/gps.hpp"
#include "pnact/pnspace.hpp"
#include "pnact/rng.hpp"

namespace pnact {

enum class StepKind { stay, travel };

struct Step {
    StepKind kind = StepKind::stay;
    std::string place;              // stay: polygon id
    std::vector<std::string> route; // travel: ordered segment ids
    double mu = 0.0;                // hours
    double eta = 0.0;               // hours
    double q = 0.0;                 // hours, truncation half-width
};

struct PatternSpec {
    std::string name;
    std::string day_type; // weekday | weekend
    double prob = 0.0;    // marginal probability over the weekly day mix
    std::vector<Step> steps; // final step absorbs the remaining time
};

struct SimDefaults {
    int n = 30;
    int m = 479;
    double sigma = 0.1;
    std::string spacing = "even"; // even | realistic
    std::uint64_t seed = 1;
};

struct Scenario {
    std::vector<Entity> entities;
    std::vector<PatternSpec> patterns;
    SimDefaults defaults;

    const Entity& find(const std::string& id) const;
    std::size_t index_of(const std::string& id) const;
};

Scenario load_scenario(const std::string& path);
Scenario scenario_from_json_text(const std::string& text);
void validate_scenario(const Scenario& sc);

// "weekday" for days 1-5 of each week, "weekend" for days 6-7 (day is 1-based).
std::string day_type_for(int day);

// Index into sc.patterns, drawn from the day-type-conditional distribution.
std::size_t sample_day_pattern(const std::string& day_type, const Scenario& sc, Rng& rng);

// Realized step durations as day fractions; the final step absorbs whatever
// remains. Days whose non-final draws exceed 24 h are resampled (counted).
std::vector<double> sample_durations(const PatternSpec& pattern, Rng& rng,
                                     int* resamples = nullptr);

struct ScheduleItem {
    StepKind kind = StepKind::stay;
    std::string place;
    std::size_t place_idx = 0; // entity index for stays
    std::vector<std::string> route;
    double t0 = 0.0, t1 = 0.0;  // day fractions
    std::vector<Point2D> path;  // travel: oriented concatenated polyline
    std::vector<double> seg_len; // travel: per-route-segment lengths
    double path_len = 0.0;
};

struct DaySchedule {
    int day = 0;
    std::string day_type;
    std::size_t pattern = 0; // index into scenario patterns
    std::vector<ScheduleItem> items;
    int resamples = 0;
};

struct RoutePath {
    std::vector<Point2D> pts;
    std::vector<double> seg_len;
    double total = 0.0;
};

// Chains the route's segments end to end, flipping orientations as needed;
// consecutive segments must share an endpoint.
RoutePath route_polyline(const Scenario& sc, const std::vector<std::string>& route);

DaySchedule build_schedule(const Scenario& sc, int day, const std::string& day_type,
                           std::size_t pattern, Rng& rng);

// Stay: uniform point inside the polygon (fresh draw per call).
// Travel: constant-speed position along the route polyline.
Point2D realize_position(const Scenario& sc, const DaySchedule& sched, double t, Rng& rng);

std::vector<double> gen_timestamps_even(int m);

// Subsamples the reference day when it is larger than m, otherwise keeps it
// and fills up from a Gaussian KDE (Silverman bandwidth). Sorted, strictly
// increasing, in [0, 1].
std::vector<double> gen_timestamps_realistic(int m, const std::vector<double>& reference,
                                             Rng& rng);

// Synthetic reference day: clustered daytime bulk plus sparse night
// observations (~6% below t=0.27 or above t=0.95), 150-600 points.
std::vector<double> make_reference_day(Rng& rng);

void add_noise(std::vector<Point2D>& pts, double sigma, Rng& rng);

struct Visit {
    std::string entity;
    double t0 = 0.0, t1 = 0.0;
    int observations = 0;
};

struct DayTruth {
    std::map<std::string, double, NaturalLess> T; // exact day fractions
    std::map<std::string, int, NaturalLess> visits;
    std::map<std::string, int, NaturalLess> crossings;
    std::vector<Visit> intervals; // occupancy timeline, adjacent-merged
};

// Stays contribute their full duration; travel time splits across the route's
// segments proportional to length. Crossings per visit: 2 minus one for each
// day boundary the visit touches.
DayTruth ground_truth(const Scenario& sc, const DaySchedule& sched);

void count_observations(DayTruth& truth, const std::vector<double>& t);

struct SimDay {
    DaySchedule schedule;
    std::vector<Point2D> true_pts;
    GpsDay gps; // noisy observations
    DayTruth truth;
};

struct SimStudy {
    std::uint64_t seed = 0;
    int replicate = 0;
    std::vector<SimDay> days;
};

// Each day draws from an independent (seed, replicate, day) stream, so the
// result is bit-identical for any thread count.
SimStudy simulate_study(const Scenario& sc, int n, int m, double sigma,
                        const std::string& spacing, std::uint64_t seed,
                        int replicate = 0, int threads = 1);

std::vector<GpsDay> study_gps(const SimStudy& study);

void write_truth_csv(const SimStudy& study, const Scenario& sc, const std::string& path);
void write_days_csv(const SimStudy& study, const std::string& path);
void write_diagnostics_csv(const SimStudy& study, const std::string& path);

} // namespace pnact
