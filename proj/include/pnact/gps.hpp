#pragma once
#include <iosfwd>
#include <string>
#include <vector>

#include "pnact/geometry.hpp"

namespace pnact {

// One day's observations, timestamps rescaled so the day spans [0, 1].
struct GpsDay {
    int day = 0;
    std::vector<double> t;
    std::vector<Point2D> pts;
    std::vector<double> accuracy; // empty when the column is absent
};

struct ParseReport {
    std::vector<int> dropped_empty;    // days with no usable records
    std::vector<int> rejected;         // days with non-monotone timestamps
    std::size_t duplicates_collapsed = 0;
    std::vector<std::string> warnings;
};

// CSV columns day,timestamp,x,y[,accuracy]. Numeric timestamps are seconds
// within the day (0..86400); ISO forms hh:mm[:ss] and YYYY-MM-DDThh:mm[:ss]
// use their clock time. t = seconds / 86400. Duplicate adjacent timestamps
// collapse keeping the first record; a day that is still not strictly
// increasing afterwards is rejected with a diagnostic.
std::vector<GpsDay> parse_gps(std::istream& in, ParseReport* report = nullptr);
std::vector<GpsDay> parse_gps_file(const std::string& path, ParseReport* report = nullptr);

// Inverse of the parser's convention: emits seconds-of-day timestamps.
void write_gps_csv(const std::vector<GpsDay>& days, const std::string& path);

} // namespace pnact
