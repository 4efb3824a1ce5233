#pragma once
#include <map>
#include <string>
#include <vector>

#include "pnact/gps.hpp"
#include "pnact/pnspace.hpp"

namespace pnact {

// Half-gap dwell weights: W_j = (t_{j+1} - t_{j-1})/2 for interior j,
// W_1 = (t_1 + t_2)/2, W_m = 1 - (t_{m-1} + t_m)/2. Sums to 1 by
// construction. A single observation gets W = 1.
std::vector<double> compute_marks(const std::vector<double>& t);

struct MarkedDay {
    int day = 0;
    std::vector<double> t;
    std::vector<Point2D> pts;
    std::vector<double> W;
    std::vector<std::size_t> entity; // index into the PNSpace
    std::vector<double> margin;
};

MarkedDay assign(const GpsDay& day, const PNSpace& pn);

// Boundary adjustment: one left-to-right pass over interior observations.
// When both neighbors carry the same label e of the opposite kind and the
// point lies within `threshold` of e, the observation is relabeled to e.
// Neighbor labels are read as already updated within the pass; first and
// last observations are never touched.
void adjust_assignments(MarkedDay& day, const PNSpace& pn, double threshold);

struct TimeUseTable {
    struct Cell {
        double prop = 0.0;
        Kind kind = Kind::polygon;
    };
    std::map<std::string, Cell, NaturalLess> cells;

    double T_A() const; // polygon class total
    double T_L() const; // road class total
    double sum() const;
    std::map<std::string, double, NaturalLess> proportions() const;
};

enum class EstimatorMode { naive, weighted, adjusted };

EstimatorMode estimator_mode_from_string(const std::string& s);

// T_e = (1/n) sum_i sum_j w_ij 1(E_ij = e), with w = 1/m_i (naive) or the
// marks W_ij (weighted). Adjusted runs the boundary adjustment per day and
// then weights. Output sums to 1 over entities.
TimeUseTable estimate(const std::vector<MarkedDay>& days, const PNSpace& pn, EstimatorMode mode,
                      double threshold = 0.1);

struct ClassTable {
    std::map<std::string, double, NaturalLess> prop;
    bool empty_class = false; // class total was zero; table left empty
};

struct ClassTables {
    ClassTable polygon;
    ClassTable road;
};

ClassTables normalize_by_class(const TimeUseTable& table);

void write_timeuse_csv(const TimeUseTable& table, const std::string& path);
TimeUseTable read_timeuse_csv(const std::string& path);
std::string timeuse_to_json(const TimeUseTable& table);

} // namespace pnact
