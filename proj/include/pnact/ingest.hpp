#pragma once
#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "pnact/geometry.hpp"
#include "pnact/pnspace.hpp"

namespace pnact {

struct WeightedPoint {
    Point2D p;
    double w = 1.0;
};

// Shared point-in-box rule so the lattice search and any brute-force
// verification agree at the edges.
inline bool box_contains(const Point2D& lo, double theta, const Point2D& p) {
    return p.x >= lo.x - 1e-12 && p.x <= lo.x + theta + 1e-12 && p.y >= lo.y - 1e-12 &&
           p.y <= lo.y + theta + 1e-12;
}

// Max-weight theta x theta box over an r-lattice anchored at the data's min
// corner. Ties resolve to the smallest (min-x, then min-y) anchor.
BoundingBox bounding_box_search(const std::vector<WeightedPoint>& pts, double theta, double r);

// Fraction of records within d0 of their nearest road segment; an empty
// network yields 0, zero records are an error.
double road_coverage(const std::vector<Point2D>& pts, const std::vector<Entity>& network,
                     double d0);

// Polygons that are the nearest polygon of at least one record at distance
// <= d0, in input order.
std::vector<Entity> select_polygons(const std::vector<Point2D>& pts,
                                    const std::vector<Entity>& polygons, double d0);

struct AggregatedPolygon {
    Entity entity;                    // rings of all members combined
    std::vector<std::string> members; // original ids, natural order
};

// Single-linkage clustering on centroid distances; clusters whose linkage
// distance is strictly below `cutoff` merge (cutoff 0 merges nothing).
std::vector<AggregatedPolygon> aggregate_polygons(const std::vector<Entity>& polygons,
                                                  double cutoff);

struct ThinningDecision {
    std::string id;
    bool kept = true;
};

struct ThinnedNetwork {
    std::vector<Entity> kept;
    std::vector<ThinningDecision> decisions; // every input segment, natural id order
};

// Segments farther than r0 from every record are eligible; a seeded uniform
// fraction q of the eligible ones is dropped. Decisions are exported so other
// rendering layers can reuse them.
ThinnedNetwork privacy_thin_roads(const std::vector<Entity>& network,
                                  const std::vector<Point2D>& pts, double r0, double q,
                                  std::uint64_t seed);

void write_thinning_csv(const std::vector<ThinningDecision>& decisions, const std::string& path);

// Every polygon becomes an axis-aligned square of the given side centered at
// its outer-ring centroid; ids and order preserved.
std::vector<Entity> privacy_reshape_polygons(const std::vector<Entity>& polygons, double side);

} // namespace pnact
