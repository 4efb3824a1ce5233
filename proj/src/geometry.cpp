#include "pnact/geometry.hpp"

#include <limits>

namespace pnact {

double point_segment_distance(const Point2D& p, const Point2D& a, const Point2D& b) {
    const double vx = b.x - a.x, vy = b.y - a.y;
    const double l2 = vx * vx + vy * vy;
    if (l2 == 0.0) return dist(p, a);
    double u = ((p.x - a.x) * vx + (p.y - a.y) * vy) / l2;
    if (u < 0.0) u = 0.0;
    else if (u > 1.0) u = 1.0;
    const Point2D foot{a.x + u * vx, a.y + u * vy};
    return dist(p, foot);
}

bool point_in_ring(const Point2D& p, const std::vector<Point2D>& ring) {
    bool inside = false;
    const std::size_t n = ring.size();
    for (std::size_t i = 0, j = n - 1; i < n; j = i++) {
        const Point2D& pi = ring[i];
        const Point2D& pj = ring[j];
        if ((pi.y > p.y) != (pj.y > p.y)) {
            const double xint = (pj.x - pi.x) * (p.y - pi.y) / (pj.y - pi.y) + pi.x;
            if (p.x < xint) inside = !inside;
        }
    }
    return inside;
}

bool point_in_rings(const Point2D& p, const std::vector<std::vector<Point2D>>& rings) {
    bool inside = false;
    for (const auto& r : rings)
        if (point_in_ring(p, r)) inside = !inside;
    return inside;
}

double ring_edge_distance(const Point2D& p, const std::vector<Point2D>& ring) {
    double best = std::numeric_limits<double>::infinity();
    const std::size_t n = ring.size();
    for (std::size_t i = 0, j = n - 1; i < n; j = i++) {
        const double d = point_segment_distance(p, ring[j], ring[i]);
        if (d < best) best = d;
    }
    return best;
}

double rings_edge_distance(const Point2D& p, const std::vector<std::vector<Point2D>>& rings) {
    double best = std::numeric_limits<double>::infinity();
    for (const auto& r : rings) {
        const double d = ring_edge_distance(p, r);
        if (d < best) best = d;
    }
    return best;
}

double polyline_length(const std::vector<Point2D>& pts) {
    double len = 0.0;
    for (std::size_t i = 1; i < pts.size(); ++i) len += dist(pts[i - 1], pts[i]);
    return len;
}

double polyline_distance(const Point2D& p, const std::vector<Point2D>& pts) {
    if (pts.size() == 1) return dist(p, pts[0]);
    double best = std::numeric_limits<double>::infinity();
    for (std::size_t i = 1; i < pts.size(); ++i) {
        const double d = point_segment_distance(p, pts[i - 1], pts[i]);
        if (d < best) best = d;
    }
    return best;
}

Point2D polyline_at(const std::vector<Point2D>& pts, double s) {
    if (s <= 0.0) return pts.front();
    for (std::size_t i = 1; i < pts.size(); ++i) {
        const double seg = dist(pts[i - 1], pts[i]);
        if (s <= seg) {
            const double u = seg > 0.0 ? s / seg : 0.0;
            return {pts[i - 1].x + u * (pts[i].x - pts[i - 1].x),
                    pts[i - 1].y + u * (pts[i].y - pts[i - 1].y)};
        }
        s -= seg;
    }
    return pts.back();
}

double ring_area(const std::vector<Point2D>& ring) {
    double a = 0.0;
    const std::size_t n = ring.size();
    for (std::size_t i = 0, j = n - 1; i < n; j = i++)
        a += ring[j].x * ring[i].y - ring[i].x * ring[j].y;
    return 0.5 * a;
}

Point2D ring_centroid(const std::vector<Point2D>& ring) {
    double a = 0.0, cx = 0.0, cy = 0.0;
    const std::size_t n = ring.size();
    for (std::size_t i = 0, j = n - 1; i < n; j = i++) {
        const double cross = ring[j].x * ring[i].y - ring[i].x * ring[j].y;
        a += cross;
        cx += (ring[j].x + ring[i].x) * cross;
        cy += (ring[j].y + ring[i].y) * cross;
    }
    a *= 0.5;
    if (a == 0.0) { // degenerate: fall back to vertex mean
        for (const auto& p : ring) { cx += p.x; cy += p.y; }
        return {cx / n, cy / n};
    }
    return {cx / (6.0 * a), cy / (6.0 * a)};
}

} // namespace pnact
