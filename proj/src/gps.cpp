#include "pnact/gps.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <map>
#include <sstream>

#include "pnact/errors.hpp"

namespace pnact {

namespace {

std::vector<std::string> split_csv(const std::string& line) {
    std::vector<std::string> out;
    std::string field;
    std::stringstream ss(line);
    while (std::getline(ss, field, ',')) out.push_back(field);
    return out;
}

bool is_number(const std::string& s) {
    if (s.empty()) return false;
    char* end = nullptr;
    std::strtod(s.c_str(), &end);
    return end == s.c_str() + s.size();
}

// seconds since the day's midnight
double parse_timestamp(const std::string& raw, std::size_t lineno) {
    std::string s = raw;
    // strip a leading date ("YYYY-MM-DDThh:mm:ss" or with a space)
    const auto tpos = s.find_first_of("T ");
    if (tpos != std::string::npos && s.find(':') != std::string::npos && s.find('-') != std::string::npos)
        s = s.substr(tpos + 1);

    if (s.find(':') != std::string::npos) {
        int h = 0, m = 0;
        double sec = 0.0;
        const int got = std::sscanf(s.c_str(), "%d:%d:%lf", &h, &m, &sec);
        if (got < 2 || h < 0 || h > 24 || m < 0 || m >= 60 || sec < 0.0 || sec >= 60.0)
            throw ValidationError("line " + std::to_string(lineno) + ": bad clock time '" + raw + "'");
        const double total = h * 3600.0 + m * 60.0 + sec;
        if (total > 86400.0)
            throw ValidationError("line " + std::to_string(lineno) + ": clock time past 24:00");
        return total;
    }
    if (!is_number(s))
        throw ValidationError("line " + std::to_string(lineno) + ": bad timestamp '" + raw + "'");
    const double v = std::stod(s);
    if (v < 0.0 || v > 86400.0)
        throw ValidationError("line " + std::to_string(lineno) +
                              ": numeric timestamps must be seconds within the day [0, 86400]");
    return v;
}

} // namespace

std::vector<GpsDay> parse_gps(std::istream& in, ParseReport* report) {
    ParseReport local;
    ParseReport& rep = report ? *report : local;

    std::string line;
    std::size_t lineno = 0;
    bool has_accuracy = false;
    bool saw_header = false;

    struct Row {
        double t;
        Point2D p;
        double acc;
    };
    std::map<int, std::vector<Row>> by_day; // ordered by day index

    while (std::getline(in, line)) {
        ++lineno;
        while (!line.empty() && (line.back() == '\r' || line.back() == '\n')) line.pop_back();
        if (line.empty()) continue;
        auto fields = split_csv(line);
        if (!saw_header) {
            saw_header = true;
            if (!fields.empty() && !is_number(fields[0])) {
                if (fields.size() < 4 || fields[0] != "day" || fields[1] != "timestamp" ||
                    fields[2] != "x" || fields[3] != "y")
                    throw ValidationError("GPS header must be day,timestamp,x,y[,accuracy]");
                has_accuracy = fields.size() >= 5;
                continue;
            }
        }
        if (fields.size() < 4)
            throw ValidationError("line " + std::to_string(lineno) + ": expected day,timestamp,x,y[,accuracy]");
        if (!is_number(fields[0]) || !is_number(fields[2]) || !is_number(fields[3]))
            throw ValidationError("line " + std::to_string(lineno) + ": malformed record");
        Row r;
        r.t = parse_timestamp(fields[1], lineno) / 86400.0;
        r.p = {std::stod(fields[2]), std::stod(fields[3])};
        r.acc = -1.0;
        if (fields.size() >= 5 && !fields[4].empty()) {
            if (!is_number(fields[4]))
                throw ValidationError("line " + std::to_string(lineno) + ": bad accuracy");
            r.acc = std::stod(fields[4]);
            has_accuracy = true;
        }
        by_day[static_cast<int>(std::stod(fields[0]))].push_back(r);
    }

    std::vector<GpsDay> out;
    for (auto& [day, rows] : by_day) {
        if (rows.empty()) {
            rep.dropped_empty.push_back(day);
            rep.warnings.push_back("day " + std::to_string(day) + ": empty, dropped");
            continue;
        }
        // collapse duplicate adjacent timestamps, keeping the first record
        std::vector<Row> kept;
        kept.reserve(rows.size());
        for (const auto& r : rows) {
            if (!kept.empty() && r.t == kept.back().t) {
                ++rep.duplicates_collapsed;
                continue;
            }
            kept.push_back(r);
        }
        bool monotone = true;
        for (std::size_t j = 1; j < kept.size(); ++j)
            if (kept[j].t <= kept[j - 1].t) {
                monotone = false;
                break;
            }
        if (!monotone) {
            rep.rejected.push_back(day);
            rep.warnings.push_back("day " + std::to_string(day) +
                                   ": timestamps not strictly increasing, rejected");
            continue;
        }
        GpsDay gd;
        gd.day = day;
        for (const auto& r : kept) {
            gd.t.push_back(r.t);
            gd.pts.push_back(r.p);
            if (has_accuracy) gd.accuracy.push_back(r.acc);
        }
        out.push_back(std::move(gd));
    }
    return out;
}

std::vector<GpsDay> parse_gps_file(const std::string& path, ParseReport* report) {
    std::ifstream in(path);
    if (!in) throw ValidationError("cannot open '" + path + "'");
    return parse_gps(in, report);
}

void write_gps_csv(const std::vector<GpsDay>& days, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw ValidationError("cannot write '" + path + "'");
    const bool has_acc = std::any_of(days.begin(), days.end(),
                                     [](const GpsDay& d) { return !d.accuracy.empty(); });
    out << (has_acc ? "day,timestamp,x,y,accuracy\n" : "day,timestamp,x,y\n");
    char buf[160];
    for (const auto& d : days) {
        for (std::size_t j = 0; j < d.t.size(); ++j) {
            if (has_acc)
                std::snprintf(buf, sizeof buf, "%d,%.10f,%.12g,%.12g,%.12g\n", d.day,
                              d.t[j] * 86400.0, d.pts[j].x, d.pts[j].y,
                              d.accuracy.empty() ? -1.0 : d.accuracy[j]);
            else
                std::snprintf(buf, sizeof buf, "%d,%.10f,%.12g,%.12g\n", d.day, d.t[j] * 86400.0,
                              d.pts[j].x, d.pts[j].y);
            out << buf;
        }
    }
}

} // namespace pnact
