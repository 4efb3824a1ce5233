#pragma once
#include <string>
#include <vector>

#include "pnact/clustering.hpp"
#include "pnact/estimation.hpp"
#include "pnact/stability.hpp"

namespace pnact {

// Horizontal bars of log(1 + p_e) per entity, polygons and road segments in
// separate colors.
void svg_timeuse_bars(const TimeUseTable& table, const std::string& path);

// Single-linkage dendrogram; leaves are day indices.
void svg_dendrogram(const Linkage& linkage, const std::string& path);

// Symmetric-difference ratio curves over D, one polyline per (class, c).
void svg_lct_curves(const std::vector<StabilitySeries>& series, const std::string& path);

} // namespace pnact
