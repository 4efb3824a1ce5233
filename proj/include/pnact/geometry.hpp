#pragma once
#include <vector>
#include <cmath>

namespace pnact {

struct Point2D {
    double x = 0.0;
    double y = 0.0;
};

inline double dist2(const Point2D& a, const Point2D& b) {
    const double dx = a.x - b.x, dy = a.y - b.y;
    return dx * dx + dy * dy;
}

inline double dist(const Point2D& a, const Point2D& b) { return std::sqrt(dist2(a, b)); }

// Distance from p to the closed segment [a, b].
double point_segment_distance(const Point2D& p, const Point2D& a, const Point2D& b);

// Even-odd containment test over one ring (boundary not guaranteed either way;
// callers that care about the boundary check edge distance == 0 as well).
bool point_in_ring(const Point2D& p, const std::vector<Point2D>& ring);

// Even-odd over a set of rings (outer + holes, or several disjoint parts).
bool point_in_rings(const Point2D& p, const std::vector<std::vector<Point2D>>& rings);

// Minimum distance from p to any edge of the ring(s).
double ring_edge_distance(const Point2D& p, const std::vector<Point2D>& ring);
double rings_edge_distance(const Point2D& p, const std::vector<std::vector<Point2D>>& rings);

double polyline_length(const std::vector<Point2D>& pts);
double polyline_distance(const Point2D& p, const std::vector<Point2D>& pts);

// Point at arc-length s along the polyline (clamped to [0, length]).
Point2D polyline_at(const std::vector<Point2D>& pts, double s);

double ring_area(const std::vector<Point2D>& ring);      // signed, shoelace
Point2D ring_centroid(const std::vector<Point2D>& ring); // area centroid

struct BoundingBox {
    Point2D lo;
    Point2D hi;

    void expand(const Point2D& p) {
        if (p.x < lo.x) lo.x = p.x;
        if (p.y < lo.y) lo.y = p.y;
        if (p.x > hi.x) hi.x = p.x;
        if (p.y > hi.y) hi.y = p.y;
    }
    void expand(const BoundingBox& b) {
        expand(b.lo);
        expand(b.hi);
    }
    bool contains(const Point2D& p, double eps = 0.0) const {
        return p.x >= lo.x - eps && p.x <= hi.x + eps && p.y >= lo.y - eps && p.y <= hi.y + eps;
    }
    double distance(const Point2D& p) const {
        const double dx = std::max({lo.x - p.x, 0.0, p.x - hi.x});
        const double dy = std::max({lo.y - p.y, 0.0, p.y - hi.y});
        return std::sqrt(dx * dx + dy * dy);
    }
    static BoundingBox empty() {
        const double inf = std::numeric_limits<double>::infinity();
        return {{inf, inf}, {-inf, -inf}};
    }
};

} // namespace pnact
