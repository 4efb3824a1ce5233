#include "pnact/stability.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "pnact/errors.hpp"

namespace pnact {

TimeUseTable cumulative_table(const std::vector<MarkedDay>& days, std::size_t D,
                              const PNSpace& pn) {
    if (D < 1 || D > days.size()) throw ValidationError("cumulative_table: D out of range");
    const std::vector<MarkedDay> prefix(days.begin(), days.begin() + static_cast<long>(D));
    return estimate(prefix, pn, EstimatorMode::weighted);
}

double sym_diff_ratio(const std::set<std::string, NaturalLess>& s,
                      const std::set<std::string, NaturalLess>& s_final) {
    if (s_final.empty()) return 0.0;
    std::size_t sym = 0;
    for (const auto& id : s)
        if (!s_final.count(id)) ++sym;
    for (const auto& id : s_final)
        if (!s.count(id)) ++sym;
    return static_cast<double>(sym) / static_cast<double>(s_final.size());
}

int lct(const std::vector<double>& ratios, double xi) {
    if (xi < 0.0) throw ValidationError("lct: negative xi");
    int last = 0;
    for (std::size_t i = 0; i < ratios.size(); ++i)
        if (ratios[i] > xi) last = static_cast<int>(i) + 1;
    return last;
}

namespace {

std::set<std::string, NaturalLess> level_members(const TimeUseTable& cum, Kind cls, double c) {
    const ClassTables norm = normalize_by_class(cum);
    const ClassTable& side = cls == Kind::polygon ? norm.polygon : norm.road;
    if (side.empty_class) return {};
    const ActivitySpace as = level_space(side.prop, c);
    return {as.members.begin(), as.members.end()};
}

} // namespace

std::vector<StabilitySeries> stability_series(const std::vector<MarkedDay>& days,
                                              const PNSpace& pn, Kind cls,
                                              const std::vector<double>& levels) {
    if (days.empty()) throw ValidationError("stability_series: no days");
    const std::size_t n = days.size();

    // running per-entity sums; dividing by D gives the cumulative table
    std::vector<double> acc(pn.size(), 0.0);
    std::vector<TimeUseTable> cum(n);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < days[i].entity.size(); ++j)
            acc[days[i].entity[j]] += days[i].W[j];
        TimeUseTable t;
        for (std::size_t e = 0; e < pn.size(); ++e) {
            if (acc[e] == 0.0) continue;
            t.cells[pn.entity(e).id] = {acc[e] / static_cast<double>(i + 1),
                                        pn.entity(e).kind};
        }
        cum[i] = std::move(t);
    }

    std::vector<StabilitySeries> out;
    for (const double c : levels) {
        StabilitySeries s;
        s.cls = cls == Kind::polygon ? "polygon" : "road";
        s.c = c;
        const auto final_set = level_members(cum[n - 1], cls, c);
        s.ratios.reserve(n);
        for (std::size_t i = 0; i < n; ++i)
            s.ratios.push_back(sym_diff_ratio(level_members(cum[i], cls, c), final_set));
        out.push_back(std::move(s));
    }
    return out;
}

std::vector<LctPoint> lct_curve(const std::vector<StabilitySeries>& series,
                                const std::vector<double>& xis) {
    std::vector<LctPoint> out;
    for (const auto& s : series)
        for (const double xi : xis)
            out.push_back({s.cls, s.c, xi, lct(s.ratios, xi)});
    return out;
}

void write_ratios_csv(const std::vector<StabilitySeries>& series, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw ValidationError("cannot write '" + path + "'");
    out << "class,c,D,ratio\n";
    char buf[96];
    for (const auto& s : series)
        for (std::size_t i = 0; i < s.ratios.size(); ++i) {
            std::snprintf(buf, sizeof buf, "%s,%.12g,%zu,%.12g\n", s.cls.c_str(), s.c, i + 1,
                          s.ratios[i]);
            out << buf;
        }
}

std::vector<StabilitySeries> read_ratios_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ValidationError("cannot open '" + path + "'");
    std::string line;
    if (!std::getline(in, line) || line.rfind("class,c,D,ratio", 0) != 0)
        throw ValidationError("'" + path + "': expected header class,c,D,ratio");
    std::vector<StabilitySeries> out;
    std::size_t lineno = 1;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty()) continue;
        std::istringstream row(line);
        std::string cls, c_s, d_s, r_s;
        if (!std::getline(row, cls, ',') || !std::getline(row, c_s, ',') ||
            !std::getline(row, d_s, ',') || !std::getline(row, r_s))
            throw ValidationError("'" + path + "' line " + std::to_string(lineno) +
                                  ": expected class,c,D,ratio");
        double c = 0.0, ratio = 0.0;
        std::size_t d = 0;
        try {
            c = std::stod(c_s);
            d = static_cast<std::size_t>(std::stoul(d_s));
            ratio = std::stod(r_s);
        } catch (const std::exception&) {
            throw ValidationError("'" + path + "' line " + std::to_string(lineno) +
                                  ": bad number");
        }
        if (out.empty() || out.back().cls != cls || out.back().c != c)
            out.push_back({cls, c, {}});
        if (d != out.back().ratios.size() + 1)
            throw ValidationError("'" + path + "' line " + std::to_string(lineno) +
                                  ": D values must run 1..n per series");
        out.back().ratios.push_back(ratio);
    }
    if (out.empty()) throw ValidationError("'" + path + "': no ratio rows");
    return out;
}

void write_lct_csv(const std::vector<LctPoint>& points, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw ValidationError("cannot write '" + path + "'");
    out << "class,c,xi,lct\n";
    char buf[96];
    for (const auto& p : points) {
        std::snprintf(buf, sizeof buf, "%s,%.12g,%.12g,%d\n", p.cls.c_str(), p.c, p.xi, p.lct);
        out << buf;
    }
}

} // namespace pnact
