#pragma once
#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "pnact/estimation.hpp"
#include "pnact/simulator.hpp"

namespace pnact {

using TruthTable = std::map<std::string, double, NaturalLess>;

// sqrt(mean over replicates of the per-replicate sum of squared entity
// errors); entities absent on one side count as 0 there.
double rmise(const std::vector<TimeUseTable>& estimates, const std::vector<TruthTable>& truths);

double squared_error_sum(const TimeUseTable& estimate, const TruthTable& truth);

// RMISE plus its delta-method standard error from per-replicate squared-error
// sums.
struct RmiseStat {
    double value = 0.0;
    double se = 0.0;
};
RmiseStat rmise_stat(const std::vector<double>& sq_sums);

// Expected per-entity occupation for one day type, durations at their means
// (the truncation is symmetric, so E equals mu); travel time splits across
// route segments proportional to length.
TruthTable expected_truth(const Scenario& sc, const std::string& day_type);

// Day-type expectations averaged over the calendar of days 1..n.
TruthTable analytic_truth(const Scenario& sc, int n);

struct ExperimentGrid {
    std::vector<int> n_values;
    std::vector<int> m_values;
    double sigma = 0.1;
    std::string spacing = "even"; // even | realistic
    double epsilon = 0.1;         // boundary-adjustment threshold
    int replicates = 50;
    std::uint64_t seed = 1;
    int threads = 1;
};

struct CellResult {
    std::string spacing;
    int n = 0;
    int m = 0;
    double epsilon = 0.0;
    double naive = 0.0;
    double weighted = 0.0;
    double adjusted = 0.0;
    double se_naive = 0.0;
    double se_weighted = 0.0;
    double se_adjusted = 0.0;
    int R = 0;
};

std::vector<CellResult> run_comparison(const Scenario& sc, const ExperimentGrid& grid);

void write_results_csv(const std::vector<CellResult>& rows, const std::string& path);

// Least-squares slope of log(y) against log(x).
double fit_loglog_slope(const std::vector<double>& x, const std::vector<double>& y);

// Slope of log RMISE (weighted estimator, even spacing) against log n.
double convergence_check(const Scenario& sc, const std::vector<int>& n_values, int m,
                         double sigma, int replicates, std::uint64_t seed, int threads = 1);

} // namespace pnact
