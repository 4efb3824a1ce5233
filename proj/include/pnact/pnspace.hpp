#pragma once
#include <limits>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "pnact/geometry.hpp"

namespace pnact {

enum class Kind { polygon, segment };

inline const char* kind_name(Kind k) { return k == Kind::polygon ? "polygon" : "segment"; }

// Orders ids with digit runs compared numerically ("S2" < "S10", "3" < "7"),
// so tie-breaks are stable and match how humans number entities.
bool natural_less(const std::string& a, const std::string& b);

struct NaturalLess {
    bool operator()(const std::string& a, const std::string& b) const { return natural_less(a, b); }
};

struct Entity {
    std::string id;
    Kind kind = Kind::polygon;
    std::vector<std::vector<Point2D>> rings; // polygon parts (even-odd)
    std::vector<Point2D> line;               // polyline vertices
    double weight = 1.0;

    BoundingBox bbox() const;
};

double distance_point_to_entity(const Point2D& p, const Entity& e);

struct NearestHit {
    std::size_t index = 0;
    double distance = std::numeric_limits<double>::infinity();
};

// Immutable after construction; concurrent read-only queries are safe.
// The bounding-box tree only accelerates; nearest_linear defines the answer.
class PNSpace {
public:
    explicit PNSpace(std::vector<Entity> entities, double meters_per_unit = 1.0);

    std::size_t size() const { return entities_.size(); }
    const std::vector<Entity>& entities() const { return entities_; }
    const Entity& entity(std::size_t i) const { return entities_[i]; }
    double meters_per_unit() const { return meters_per_unit_; }

    std::optional<std::size_t> find(const std::string& id) const;

    NearestHit nearest(const Point2D& p) const;
    NearestHit nearest_linear(const Point2D& p) const;

    // Nearest and second-nearest distances (d1 <= d2).
    std::pair<double, double> nearest_two_distances(const Point2D& p) const;

    // (d2 - d1) / 2: certified lower bound on the distance to the assignment
    // boundary (distance-to-set is 1-Lipschitz). +inf for a single entity.
    double voronoi_margin(const Point2D& p) const;

private:
    struct Node {
        BoundingBox box;
        int left = -1, right = -1;     // children, or
        int first = -1, count = 0;     // leaf range into order_
    };
    int build(int first, int count);
    void validate() const;

    std::vector<Entity> entities_;
    double meters_per_unit_;
    std::vector<std::size_t> order_; // entity indices, leaf-partitioned
    std::vector<Node> nodes_;
    int root_ = -1;
};

// min(1, exp(-margin^2 / (2 sigma^2))): bound on the probability that
// isotropic Gaussian noise of scale sigma pushes a point across an
// assignment boundary at least `margin` away.
double misclassification_bound(double margin, double sigma);

} // namespace pnact
