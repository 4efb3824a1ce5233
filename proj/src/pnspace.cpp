#include "pnact/pnspace.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <set>

#include "pnact/errors.hpp"

namespace pnact {

bool natural_less(const std::string& a, const std::string& b) {
    std::size_t i = 0, j = 0;
    while (i < a.size() && j < b.size()) {
        const bool da = std::isdigit(static_cast<unsigned char>(a[i])) != 0;
        const bool db = std::isdigit(static_cast<unsigned char>(b[j])) != 0;
        if (da && db) {
            std::size_t i0 = i, j0 = j;
            while (i0 < a.size() && a[i0] == '0') ++i0;
            while (j0 < b.size() && b[j0] == '0') ++j0;
            std::size_t ie = i0, je = j0;
            while (ie < a.size() && std::isdigit(static_cast<unsigned char>(a[ie]))) ++ie;
            while (je < b.size() && std::isdigit(static_cast<unsigned char>(b[je]))) ++je;
            const std::size_t la = ie - i0, lb = je - j0;
            if (la != lb) return la < lb;
            for (std::size_t k = 0; k < la; ++k)
                if (a[i0 + k] != b[j0 + k]) return a[i0 + k] < b[j0 + k];
            // numerically equal; fewer leading zeros sorts first
            const std::size_t za = i0 - i, zb = j0 - j;
            if (za != zb) return za < zb;
            i = ie;
            j = je;
        } else {
            if (a[i] != b[j]) return static_cast<unsigned char>(a[i]) < static_cast<unsigned char>(b[j]);
            ++i;
            ++j;
        }
    }
    return (a.size() - i) < (b.size() - j);
}

BoundingBox Entity::bbox() const {
    BoundingBox b = BoundingBox::empty();
    for (const auto& r : rings)
        for (const auto& p : r) b.expand(p);
    for (const auto& p : line) b.expand(p);
    return b;
}

double distance_point_to_entity(const Point2D& p, const Entity& e) {
    if (e.kind == Kind::polygon) {
        if (point_in_rings(p, e.rings)) return 0.0;
        return rings_edge_distance(p, e.rings); // 0 exactly on the boundary
    }
    return polyline_distance(p, e.line);
}

namespace {

void check_finite(const Point2D& p, const std::string& id) {
    if (!std::isfinite(p.x) || !std::isfinite(p.y))
        throw ValidationError("entity '" + id + "': non-finite coordinate");
}

} // namespace

PNSpace::PNSpace(std::vector<Entity> entities, double meters_per_unit)
    : entities_(std::move(entities)), meters_per_unit_(meters_per_unit) {
    if (entities_.empty()) throw ValidationError("PNSpace: no entities");
    if (!(meters_per_unit_ > 0.0)) throw ValidationError("PNSpace: meters_per_unit must be positive");
    validate();

    order_.resize(entities_.size());
    for (std::size_t i = 0; i < order_.size(); ++i) order_[i] = i;
    nodes_.reserve(2 * entities_.size());
    root_ = build(0, static_cast<int>(order_.size()));
}

void PNSpace::validate() const {
    std::set<std::string> ids;
    for (const auto& e : entities_) {
        if (e.id.empty()) throw ValidationError("entity with empty id");
        if (!ids.insert(e.id).second) throw ValidationError("duplicate entity id '" + e.id + "'");
        if (e.kind == Kind::polygon) {
            if (e.rings.empty()) throw ValidationError("polygon '" + e.id + "' has no rings");
            for (const auto& r : e.rings) {
                if (r.size() < 3)
                    throw ValidationError("polygon '" + e.id + "' ring with fewer than 3 vertices");
                for (const auto& p : r) check_finite(p, e.id);
                for (std::size_t i = 0; i < r.size(); ++i)
                    if (dist2(r[i], r[(i + 1) % r.size()]) == 0.0)
                        throw ValidationError("polygon '" + e.id + "': repeated consecutive vertex");
                if (ring_area(r) == 0.0)
                    throw ValidationError("polygon '" + e.id + "': zero-area ring");
            }
        } else {
            if (e.line.size() < 2)
                throw ValidationError("segment '" + e.id + "' needs at least 2 vertices");
            for (const auto& p : e.line) check_finite(p, e.id);
            for (std::size_t i = 1; i < e.line.size(); ++i)
                if (dist2(e.line[i - 1], e.line[i]) == 0.0)
                    throw ValidationError("segment '" + e.id + "': zero-length piece");
        }
        if (e.weight < 0.0) throw ValidationError("entity '" + e.id + "': negative weight");
    }
}

int PNSpace::build(int first, int count) {
    Node node;
    node.box = BoundingBox::empty();
    for (int i = first; i < first + count; ++i) node.box.expand(entities_[order_[i]].bbox());

    if (count <= 2) {
        node.first = first;
        node.count = count;
        nodes_.push_back(node);
        return static_cast<int>(nodes_.size()) - 1;
    }

    const double ex = node.box.hi.x - node.box.lo.x;
    const double ey = node.box.hi.y - node.box.lo.y;
    const bool splitx = ex >= ey;
    const auto mid = order_.begin() + first + count / 2;
    std::nth_element(order_.begin() + first, mid, order_.begin() + first + count,
                     [&](std::size_t a, std::size_t b) {
                         const BoundingBox ba = entities_[a].bbox(), bb = entities_[b].bbox();
                         const double ca = splitx ? ba.lo.x + ba.hi.x : ba.lo.y + ba.hi.y;
                         const double cb = splitx ? bb.lo.x + bb.hi.x : bb.lo.y + bb.hi.y;
                         if (ca != cb) return ca < cb;
                         return a < b; // stable split for reproducibility
                     });

    const int self = static_cast<int>(nodes_.size());
    nodes_.push_back(node);
    const int l = build(first, count / 2);
    const int r = build(first + count / 2, count - count / 2);
    nodes_[self].left = l;
    nodes_[self].right = r;
    return self;
}

std::optional<std::size_t> PNSpace::find(const std::string& id) const {
    for (std::size_t i = 0; i < entities_.size(); ++i)
        if (entities_[i].id == id) return i;
    return std::nullopt;
}

NearestHit PNSpace::nearest_linear(const Point2D& p) const {
    NearestHit best;
    for (std::size_t i = 0; i < entities_.size(); ++i) {
        const double d = distance_point_to_entity(p, entities_[i]);
        if (d < best.distance ||
            (d == best.distance && natural_less(entities_[i].id, entities_[best.index].id)))
            best = {i, d};
    }
    return best;
}

NearestHit PNSpace::nearest(const Point2D& p) const {
    NearestHit best;
    // depth-first with box-distance pruning; '>' keeps equal-distance
    // candidates alive so the id tie-break matches the linear scan
    std::vector<int> stack{root_};
    while (!stack.empty()) {
        const Node& node = nodes_[static_cast<std::size_t>(stack.back())];
        stack.pop_back();
        if (node.box.distance(p) > best.distance) continue;
        if (node.left < 0) {
            for (int i = node.first; i < node.first + node.count; ++i) {
                const std::size_t idx = order_[static_cast<std::size_t>(i)];
                const double d = distance_point_to_entity(p, entities_[idx]);
                if (d < best.distance ||
                    (d == best.distance && natural_less(entities_[idx].id, entities_[best.index].id)))
                    best = {idx, d};
            }
        } else {
            const double dl = nodes_[node.left].box.distance(p);
            const double dr = nodes_[node.right].box.distance(p);
            // visit nearer child first (pushed last)
            if (dl <= dr) {
                stack.push_back(node.right);
                stack.push_back(node.left);
            } else {
                stack.push_back(node.left);
                stack.push_back(node.right);
            }
        }
    }
    return best;
}

std::pair<double, double> PNSpace::nearest_two_distances(const Point2D& p) const {
    const double inf = std::numeric_limits<double>::infinity();
    double d1 = inf, d2 = inf;
    std::vector<int> stack{root_};
    while (!stack.empty()) {
        const Node& node = nodes_[static_cast<std::size_t>(stack.back())];
        stack.pop_back();
        if (node.box.distance(p) > d2) continue;
        if (node.left < 0) {
            for (int i = node.first; i < node.first + node.count; ++i) {
                const double d =
                    distance_point_to_entity(p, entities_[order_[static_cast<std::size_t>(i)]]);
                if (d < d1) {
                    d2 = d1;
                    d1 = d;
                } else if (d < d2) {
                    d2 = d;
                }
            }
        } else {
            const double dl = nodes_[node.left].box.distance(p);
            const double dr = nodes_[node.right].box.distance(p);
            if (dl <= dr) {
                stack.push_back(node.right);
                stack.push_back(node.left);
            } else {
                stack.push_back(node.left);
                stack.push_back(node.right);
            }
        }
    }
    return {d1, d2};
}

double PNSpace::voronoi_margin(const Point2D& p) const {
    if (entities_.size() < 2) return std::numeric_limits<double>::infinity();
    const auto [d1, d2] = nearest_two_distances(p);
    return 0.5 * (d2 - d1);
}

double misclassification_bound(double margin, double sigma) {
    if (!(sigma > 0.0)) throw ValidationError("misclassification_bound: sigma must be positive");
    if (margin < 0.0) throw ValidationError("misclassification_bound: negative margin");
    return std::min(1.0, std::exp(-margin * margin / (2.0 * sigma * sigma)));
}

} // namespace pnact
