#pragma once
#include <set>
#include <string>
#include <vector>

#include "pnact/activity_space.hpp"
#include "pnact/estimation.hpp"

namespace pnact {

// Weighted estimator restricted to days 1..D (in the given order).
TimeUseTable cumulative_table(const std::vector<MarkedDay>& days, std::size_t D,
                              const PNSpace& pn);

// |S symmetric-difference S_final| / |S_final|; 0 when S_final is empty.
double sym_diff_ratio(const std::set<std::string, NaturalLess>& s,
                      const std::set<std::string, NaturalLess>& s_final);

// Last-crossing time: max{D : ratio_D > xi}, 0 when no D qualifies.
// `ratios` is indexed D = 1..n at positions 0..n-1.
int lct(const std::vector<double>& ratios, double xi);

struct StabilitySeries {
    std::string cls; // polygon | road
    double c = 0.0;
    std::vector<double> ratios; // D = 1..n
};

// For each level c: cumulative class-normalized tables, level-c activity
// spaces, and their symmetric-difference ratios against the day-n space.
// A day where the class has zero mass yields an empty set at that D.
std::vector<StabilitySeries> stability_series(const std::vector<MarkedDay>& days,
                                              const PNSpace& pn, Kind cls,
                                              const std::vector<double>& levels);

struct LctPoint {
    std::string cls;
    double c = 0.0;
    double xi = 0.0;
    int lct = 0;
};

std::vector<LctPoint> lct_curve(const std::vector<StabilitySeries>& series,
                                const std::vector<double>& xis);

void write_ratios_csv(const std::vector<StabilitySeries>& series, const std::string& path);
std::vector<StabilitySeries> read_ratios_csv(const std::string& path);
void write_lct_csv(const std::vector<LctPoint>& points, const std::string& path);

} // namespace pnact
