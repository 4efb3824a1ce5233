#pragma once
#include <string>
#include <vector>

#include "pnact/estimation.hpp"

namespace pnact {

// Compressed action vector: visited entities with no two adjacent labels
// equal, dwell fractions summing to 1.
struct DayPattern {
    int day = 0;
    std::vector<std::string> labels;
    std::vector<double> dwell;
};

// Run-length aggregation of equal adjacent assignments, weights summed.
DayPattern compress(const MarkedDay& day, const PNSpace& pn);

// Collapse e, x_1..x_r, e blocks whose interior mass is <= tau into a single
// e, repeatedly until nothing changes. Total mass is preserved.
DayPattern remove_jitter_loops(DayPattern pattern, double tau);

// Dwell-weighted Levenshtein distance: insert costs the inserted dwell,
// delete the deleted dwell, substitute the sum of both; matching equal
// labels is free. With dwell_match_cost the match instead costs |z - z'|
// (off by default; the plain rule is the reference behavior).
double tw_edit_distance(const DayPattern& a, const DayPattern& b, bool dwell_match_cost = false);

std::vector<std::vector<double>> distance_matrix(const std::vector<DayPattern>& patterns,
                                                 int threads = 1);

struct MergeStep {
    int left = 0;   // cluster ids; leaves are 0..n-1, merges get n, n+1, ...
    int right = 0;
    double height = 0.0;
};

struct Linkage {
    std::size_t n = 0;
    std::vector<MergeStep> merges; // n-1 steps, heights nondecreasing
};

// Single-linkage agglomeration with deterministic smallest-member-index
// tie-breaking.
Linkage single_linkage(const std::vector<std::vector<double>>& matrix);

// Labels 0..k-1 numbered by each cluster's smallest member index.
std::vector<int> cut_k(const Linkage& linkage, std::size_t k);
std::vector<int> cut_height(const Linkage& linkage, double h);

// Days whose mean distance to the others exceeds mean + alpha * sd of the
// per-day means.
std::vector<std::size_t> flag_outliers(const std::vector<std::vector<double>>& matrix,
                                       double alpha = 2.0);

void write_matrix_csv(const std::vector<std::vector<double>>& matrix, const std::string& path);
std::string linkage_to_json(const Linkage& linkage);
Linkage linkage_from_json(const std::string& text);
void write_labels_csv(const std::vector<int>& days, const std::vector<int>& labels,
                      const std::vector<std::size_t>& outliers, const std::string& path);

} // namespace pnact
