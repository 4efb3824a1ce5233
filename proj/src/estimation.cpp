#include "pnact/estimation.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

#include "json.hpp"
#include "pnact/errors.hpp"

namespace pnact {

std::vector<double> compute_marks(const std::vector<double>& t) {
    const std::size_t m = t.size();
    if (m == 0) throw ValidationError("compute_marks: empty day");
    for (std::size_t j = 0; j < m; ++j) {
        if (t[j] < 0.0 || t[j] > 1.0) throw ValidationError("compute_marks: t outside [0,1]");
        if (j > 0 && t[j] <= t[j - 1])
            throw ValidationError("compute_marks: timestamps not strictly increasing");
    }
    if (m == 1) return {1.0};
    std::vector<double> W(m);
    W[0] = 0.5 * (t[0] + t[1]);
    for (std::size_t j = 1; j + 1 < m; ++j) W[j] = 0.5 * (t[j + 1] - t[j - 1]);
    W[m - 1] = 1.0 - 0.5 * (t[m - 2] + t[m - 1]);
    return W;
}

MarkedDay assign(const GpsDay& day, const PNSpace& pn) {
    MarkedDay md;
    md.day = day.day;
    md.t = day.t;
    md.pts = day.pts;
    md.W = compute_marks(day.t);
    md.entity.reserve(day.pts.size());
    md.margin.reserve(day.pts.size());
    for (const auto& p : day.pts) {
        md.entity.push_back(pn.nearest(p).index);
        md.margin.push_back(pn.voronoi_margin(p));
    }
    return md;
}

void adjust_assignments(MarkedDay& day, const PNSpace& pn, double threshold) {
    if (threshold < 0.0) throw ValidationError("adjust_assignments: negative threshold");
    const std::size_t m = day.entity.size();
    if (m < 3) return;
    for (std::size_t j = 1; j + 1 < m; ++j) {
        const std::size_t prev = day.entity[j - 1];
        const std::size_t next = day.entity[j + 1];
        if (prev != next) continue;
        const std::size_t cur = day.entity[j];
        if (cur == prev) continue;
        const Entity& e = pn.entity(prev);
        if (e.kind == pn.entity(cur).kind) continue; // rule applies across kinds only
        if (distance_point_to_entity(day.pts[j], e) < threshold) day.entity[j] = prev;
    }
}

double TimeUseTable::T_A() const {
    double s = 0.0;
    for (const auto& [id, c] : cells)
        if (c.kind == Kind::polygon) s += c.prop;
    return s;
}

double TimeUseTable::T_L() const {
    double s = 0.0;
    for (const auto& [id, c] : cells)
        if (c.kind == Kind::segment) s += c.prop;
    return s;
}

double TimeUseTable::sum() const {
    double s = 0.0;
    for (const auto& [id, c] : cells) s += c.prop;
    return s;
}

std::map<std::string, double, NaturalLess> TimeUseTable::proportions() const {
    std::map<std::string, double, NaturalLess> out;
    for (const auto& [id, c] : cells) out[id] = c.prop;
    return out;
}

EstimatorMode estimator_mode_from_string(const std::string& s) {
    if (s == "naive") return EstimatorMode::naive;
    if (s == "weighted") return EstimatorMode::weighted;
    if (s == "adjusted") return EstimatorMode::adjusted;
    throw ValidationError("unknown estimator mode '" + s + "' (naive|weighted|adjusted)");
}

TimeUseTable estimate(const std::vector<MarkedDay>& days, const PNSpace& pn, EstimatorMode mode,
                      double threshold) {
    if (days.empty()) throw ValidationError("estimate: no days");
    // accumulate per entity index, then name; day order fixed by the caller
    std::vector<double> acc(pn.size(), 0.0);
    const double inv_n = 1.0 / static_cast<double>(days.size());
    for (const auto& d : days) {
        const MarkedDay* use = &d;
        MarkedDay adj;
        if (mode == EstimatorMode::adjusted) {
            adj = d;
            adjust_assignments(adj, pn, threshold);
            use = &adj;
        }
        const std::size_t m = use->entity.size();
        if (mode == EstimatorMode::naive) {
            const double w = inv_n / static_cast<double>(m);
            for (std::size_t j = 0; j < m; ++j) acc[use->entity[j]] += w;
        } else {
            for (std::size_t j = 0; j < m; ++j) acc[use->entity[j]] += inv_n * use->W[j];
        }
    }
    TimeUseTable table;
    for (std::size_t i = 0; i < pn.size(); ++i) {
        if (acc[i] == 0.0) continue;
        const Entity& e = pn.entity(i);
        table.cells[e.id] = {acc[i], e.kind};
    }
    return table;
}

ClassTables normalize_by_class(const TimeUseTable& table) {
    ClassTables out;
    const double ta = table.T_A(), tl = table.T_L();
    if (ta > 0.0) {
        for (const auto& [id, c] : table.cells)
            if (c.kind == Kind::polygon) out.polygon.prop[id] = c.prop / ta;
    } else {
        out.polygon.empty_class = true;
    }
    if (tl > 0.0) {
        for (const auto& [id, c] : table.cells)
            if (c.kind == Kind::segment) out.road.prop[id] = c.prop / tl;
    } else {
        out.road.empty_class = true;
    }
    return out;
}

void write_timeuse_csv(const TimeUseTable& table, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw ValidationError("cannot write '" + path + "'");
    const double ta = table.T_A(), tl = table.T_L();
    out << "entity-id,kind,proportion,normalized-proportion\n";
    char buf[160];
    for (const auto& [id, c] : table.cells) {
        const double cls = c.kind == Kind::polygon ? ta : tl;
        const double norm = cls > 0.0 ? c.prop / cls : 0.0;
        std::snprintf(buf, sizeof buf, "%s,%s,%.12g,%.12g\n", id.c_str(), kind_name(c.kind),
                      c.prop, norm);
        out << buf;
    }
}

TimeUseTable read_timeuse_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ValidationError("cannot open '" + path + "'");
    TimeUseTable table;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        while (!line.empty() && (line.back() == '\r' || line.back() == '\n')) line.pop_back();
        if (line.empty()) continue;
        if (lineno == 1 && line.rfind("entity-id,", 0) == 0) continue;
        std::stringstream ss(line);
        std::string id, kind, prop, norm;
        if (!std::getline(ss, id, ',') || !std::getline(ss, kind, ',') ||
            !std::getline(ss, prop, ','))
            throw ValidationError(path + ":" + std::to_string(lineno) + ": bad time-use row");
        std::getline(ss, norm, ',');
        TimeUseTable::Cell cell;
        if (kind == "polygon")
            cell.kind = Kind::polygon;
        else if (kind == "segment")
            cell.kind = Kind::segment;
        else
            throw ValidationError(path + ":" + std::to_string(lineno) + ": bad kind '" + kind + "'");
        try {
            cell.prop = std::stod(prop);
        } catch (const std::exception&) {
            throw ValidationError(path + ":" + std::to_string(lineno) + ": bad proportion");
        }
        table.cells[id] = cell;
    }
    return table;
}

std::string timeuse_to_json(const TimeUseTable& table) {
    nlohmann::ordered_json j;
    nlohmann::ordered_json props = nlohmann::ordered_json::object();
    for (const auto& [id, c] : table.cells)
        props[id] = {{"kind", kind_name(c.kind)}, {"proportion", c.prop}};
    j["entities"] = std::move(props);
    j["T_A"] = table.T_A();
    j["T_L"] = table.T_L();
    return j.dump(2);
}

} // namespace pnact
