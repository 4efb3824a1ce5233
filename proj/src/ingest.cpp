#include "pnact/ingest.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <numeric>

#include "pnact/errors.hpp"
#include "pnact/rng.hpp"

namespace pnact {

BoundingBox bounding_box_search(const std::vector<WeightedPoint>& pts, double theta, double r) {
    if (!(theta > 0.0) || !(r > 0.0))
        throw ValidationError("bounding_box_search: theta and grid step must be positive");
    if (pts.empty()) throw ValidationError("bounding_box_search: no records");

    BoundingBox extent = BoundingBox::empty();
    for (const auto& wp : pts) extent.expand(wp.p);

    const auto anchors = [&](double lo, double hi) {
        return static_cast<std::size_t>(std::floor((hi - lo) / r + 1e-9)) + 1;
    };
    const std::size_t nx = anchors(extent.lo.x, extent.hi.x);
    const std::size_t ny = anchors(extent.lo.y, extent.hi.y);

    // Each point covers a contiguous anchor range per axis; accumulate with a
    // 2-D difference array, then prefix-sum to get every candidate's weight.
    std::vector<double> diff((nx + 1) * (ny + 1), 0.0);
    const auto range = [&](double coord, double lo, std::size_t count) {
        // anchors i with lo + i*r <= coord <= lo + i*r + theta
        long first = static_cast<long>(std::ceil((coord - lo - theta) / r - 1e-9));
        long last = static_cast<long>(std::floor((coord - lo) / r + 1e-9));
        first = std::max(first, 0l);
        last = std::min(last, static_cast<long>(count) - 1);
        return std::pair<long, long>{first, last};
    };
    for (const auto& wp : pts) {
        const auto [x0, x1] = range(wp.p.x, extent.lo.x, nx);
        const auto [y0, y1] = range(wp.p.y, extent.lo.y, ny);
        if (x0 > x1 || y0 > y1) continue;
        const std::size_t stride = ny + 1;
        diff[static_cast<std::size_t>(x0) * stride + static_cast<std::size_t>(y0)] += wp.w;
        diff[static_cast<std::size_t>(x1 + 1) * stride + static_cast<std::size_t>(y0)] -= wp.w;
        diff[static_cast<std::size_t>(x0) * stride + static_cast<std::size_t>(y1 + 1)] -= wp.w;
        diff[static_cast<std::size_t>(x1 + 1) * stride + static_cast<std::size_t>(y1 + 1)] += wp.w;
    }

    double best = -1.0;
    std::size_t bi = 0, bj = 0;
    std::vector<double> col(ny + 1, 0.0);
    for (std::size_t i = 0; i < nx; ++i) {
        double run = 0.0;
        const std::size_t stride = ny + 1;
        for (std::size_t j = 0; j < ny; ++j) {
            col[j] += diff[i * stride + j];
            run += col[j];
            if (run > best + 1e-12) { // ties keep the smallest anchor
                best = run;
                bi = i;
                bj = j;
            }
        }
        col[ny] += diff[i * stride + ny];
    }

    const Point2D lo{extent.lo.x + static_cast<double>(bi) * r,
                     extent.lo.y + static_cast<double>(bj) * r};
    return {lo, {lo.x + theta, lo.y + theta}};
}

double road_coverage(const std::vector<Point2D>& pts, const std::vector<Entity>& network,
                     double d0) {
    if (!(d0 > 0.0)) throw ValidationError("road_coverage: d0 must be positive");
    if (pts.empty()) throw ValidationError("road_coverage: no records");
    if (network.empty()) return 0.0;
    std::size_t covered = 0;
    for (const auto& p : pts) {
        double best = std::numeric_limits<double>::infinity();
        for (const auto& e : network) {
            if (e.kind != Kind::segment) continue;
            best = std::min(best, distance_point_to_entity(p, e));
            if (best <= d0) break;
        }
        if (best <= d0) ++covered;
    }
    return static_cast<double>(covered) / static_cast<double>(pts.size());
}

std::vector<Entity> select_polygons(const std::vector<Point2D>& pts,
                                    const std::vector<Entity>& polygons, double d0) {
    if (!(d0 > 0.0)) throw ValidationError("select_polygons: d0 must be positive");
    std::vector<bool> keep(polygons.size(), false);
    for (const auto& p : pts) {
        double best = std::numeric_limits<double>::infinity();
        std::size_t arg = polygons.size();
        for (std::size_t i = 0; i < polygons.size(); ++i) {
            if (polygons[i].kind != Kind::polygon) continue;
            const double d = distance_point_to_entity(p, polygons[i]);
            if (d < best || (d == best && arg < polygons.size() &&
                             natural_less(polygons[i].id, polygons[arg].id)))
                best = d, arg = i;
        }
        if (arg < polygons.size() && best <= d0) keep[arg] = true;
    }
    std::vector<Entity> out;
    for (std::size_t i = 0; i < polygons.size(); ++i)
        if (keep[i]) out.push_back(polygons[i]);
    return out;
}

std::vector<AggregatedPolygon> aggregate_polygons(const std::vector<Entity>& polygons,
                                                  double cutoff) {
    if (cutoff < 0.0) throw ValidationError("aggregate_polygons: negative cutoff");
    const std::size_t n = polygons.size();
    std::vector<Point2D> cent(n);
    for (std::size_t i = 0; i < n; ++i) {
        if (polygons[i].kind != Kind::polygon)
            throw ValidationError("aggregate_polygons: '" + polygons[i].id + "' is not a polygon");
        cent[i] = ring_centroid(polygons[i].rings.front());
    }

    // single linkage via union-find over all pairs below the cutoff: a pair
    // within the cutoff always chains its clusters together
    std::vector<std::size_t> parent(n);
    std::iota(parent.begin(), parent.end(), 0);
    const std::function<std::size_t(std::size_t)> find = [&](std::size_t x) {
        while (parent[x] != x) x = parent[x] = parent[parent[x]];
        return x;
    };
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j)
            if (dist(cent[i], cent[j]) < cutoff) parent[find(i)] = find(j);

    std::vector<AggregatedPolygon> out;
    std::vector<long> cluster_of(n, -1);
    for (std::size_t i = 0; i < n; ++i) {
        const std::size_t root = find(i);
        if (cluster_of[root] < 0) {
            cluster_of[root] = static_cast<long>(out.size());
            out.emplace_back();
        }
        AggregatedPolygon& agg = out[static_cast<std::size_t>(cluster_of[root])];
        agg.members.push_back(polygons[i].id);
        for (const auto& ring : polygons[i].rings) agg.entity.rings.push_back(ring);
        agg.entity.kind = Kind::polygon;
    }
    for (auto& agg : out) {
        std::sort(agg.members.begin(), agg.members.end(), natural_less);
        agg.entity.id = agg.members.size() == 1
                            ? agg.members.front()
                            : agg.members.front() + "+" + std::to_string(agg.members.size() - 1);
    }
    return out;
}

ThinnedNetwork privacy_thin_roads(const std::vector<Entity>& network,
                                  const std::vector<Point2D>& pts, double r0, double q,
                                  std::uint64_t seed) {
    if (!(r0 > 0.0)) throw ValidationError("privacy_thin_roads: r0 must be positive");
    if (q < 0.0 || q > 1.0) throw ValidationError("privacy_thin_roads: q must lie in [0,1]");

    // iterate in natural id order so the draw sequence is input-order free
    std::vector<std::size_t> order(network.size());
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        return natural_less(network[a].id, network[b].id);
    });

    Rng rng(seed);
    ThinnedNetwork out;
    std::vector<bool> kept(network.size(), true);
    for (const std::size_t i : order) {
        const Entity& e = network[i];
        bool eligible = e.kind == Kind::segment;
        if (eligible) {
            for (const auto& p : pts) {
                if (distance_point_to_entity(p, e) <= r0) {
                    eligible = false;
                    break;
                }
            }
        }
        const bool remove = eligible && rng.uniform() < q;
        kept[i] = !remove;
        out.decisions.push_back({e.id, !remove});
    }
    for (std::size_t i = 0; i < network.size(); ++i)
        if (kept[i]) out.kept.push_back(network[i]);
    return out;
}

void write_thinning_csv(const std::vector<ThinningDecision>& decisions, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw ValidationError("cannot write '" + path + "'");
    out << "segment-id,decision\n";
    for (const auto& d : decisions) out << d.id << "," << (d.kept ? "kept" : "removed") << "\n";
}

std::vector<Entity> privacy_reshape_polygons(const std::vector<Entity>& polygons, double side) {
    if (!(side > 0.0)) throw ValidationError("privacy_reshape_polygons: side must be positive");
    std::vector<Entity> out;
    out.reserve(polygons.size());
    for (const auto& e : polygons) {
        if (e.kind != Kind::polygon)
            throw ValidationError("privacy_reshape_polygons: '" + e.id + "' is not a polygon");
        const Point2D c = ring_centroid(e.rings.front());
        const double h = 0.5 * side;
        Entity sq;
        sq.id = e.id;
        sq.kind = Kind::polygon;
        sq.weight = e.weight;
        sq.rings = {{{c.x - h, c.y - h}, {c.x + h, c.y - h}, {c.x + h, c.y + h}, {c.x - h, c.y + h}}};
        out.push_back(std::move(sq));
    }
    return out;
}

} // namespace pnact
