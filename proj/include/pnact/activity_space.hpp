#pragma once
#include <map>
#include <string>
#include <vector>

#include "pnact/pnspace.hpp"

namespace pnact {

struct ActivitySpace {
    double gamma = 0.0;
    std::string cls = "all"; // all | polygon | road | composed
    std::vector<std::string> members; // natural id order
    double mass = 0.0;
    bool heuristic = false;       // weighted variant fell back to greedy
    double optimality_gap = 0.0;  // achieved weight minus fractional bound
    double total_weight = 0.0;    // weighted variant only
};

using Proportions = std::map<std::string, double, NaturalLess>;

// Smallest entity set reaching cumulative mass gamma: sort by proportion
// descending (ties by id), take the shortest qualifying prefix. Realizes
// minimal cardinality and, among minimal sets, maximal mass.
ActivitySpace level_space(const Proportions& table, double gamma, const std::string& cls = "all");

// Union of the polygon-level and road-level spaces. Reported mass is the
// smaller of the two sides' achieved masses (the level both classes jointly
// guarantee); an empty side is skipped, so composed == the other side alone.
ActivitySpace composed_space(const Proportions& polygon_table, const Proportions& road_table,
                             double gamma);

// Exact minimizer of total weight subject to mass >= gamma (ties: larger
// mass, then id order), branch-and-bound up to 30 entities; above that a
// greedy density heuristic with a reported optimality gap, flagged.
ActivitySpace weighted_level_space(const Proportions& table,
                                   const std::map<std::string, double, NaturalLess>& weights,
                                   double gamma);

std::string activity_spaces_to_json(const std::vector<ActivitySpace>& spaces);

} // namespace pnact
