#include "pnact/simulator.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "json.hpp"
#include "pnact/errors.hpp"
#include "pnact/geojson.hpp"
#include "pnact/parallel.hpp"

namespace pnact {

using nlohmann::json;

const Entity& Scenario::find(const std::string& id) const {
    return entities[index_of(id)];
}

std::size_t Scenario::index_of(const std::string& id) const {
    for (std::size_t i = 0; i < entities.size(); ++i)
        if (entities[i].id == id) return i;
    throw ValidationError("scenario references unknown entity '" + id + "'");
}

std::string day_type_for(int day) {
    if (day < 1) throw ValidationError("day index must be >= 1");
    return (day - 1) % 7 < 5 ? "weekday" : "weekend";
}

namespace {

Step parse_step(const json& j) {
    Step s;
    if (j.contains("stay")) {
        s.kind = StepKind::stay;
        s.place = j.at("stay").get<std::string>();
    } else if (j.contains("travel")) {
        s.kind = StepKind::travel;
        for (const auto& seg : j.at("travel")) s.route.push_back(seg.get<std::string>());
    } else {
        throw ValidationError("pattern step needs a 'stay' or 'travel' field");
    }
    s.mu = j.at("mu").get<double>();
    s.eta = j.value("eta", 0.0);
    s.q = j.value("q", 0.0);
    return s;
}

} // namespace

Scenario scenario_from_json_text(const std::string& text) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::exception& e) {
        throw ValidationError(std::string("scenario JSON: ") + e.what());
    }
    Scenario sc;
    try {
        sc.entities = entities_from_geojson(j.at("map").dump());
        for (const auto& p : j.at("patterns")) {
            PatternSpec ps;
            ps.name = p.at("name").get<std::string>();
            ps.day_type = p.at("day_type").get<std::string>();
            ps.prob = p.at("prob").get<double>();
            for (const auto& st : p.at("steps")) ps.steps.push_back(parse_step(st));
            sc.patterns.push_back(std::move(ps));
        }
        if (j.contains("defaults")) {
            const auto& d = j["defaults"];
            sc.defaults.n = d.value("n", sc.defaults.n);
            sc.defaults.m = d.value("m", sc.defaults.m);
            sc.defaults.sigma = d.value("sigma", sc.defaults.sigma);
            sc.defaults.spacing = d.value("spacing", sc.defaults.spacing);
            sc.defaults.seed = d.value("seed", sc.defaults.seed);
        }
    } catch (const json::exception& e) {
        throw ValidationError(std::string("scenario JSON: ") + e.what());
    }
    validate_scenario(sc);
    return sc;
}

Scenario load_scenario(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ValidationError("cannot open scenario '" + path + "'");
    std::ostringstream buf;
    buf << in.rdbuf();
    return scenario_from_json_text(buf.str());
}

void validate_scenario(const Scenario& sc) {
    PNSpace geometry_check(sc.entities); // validates ids, rings, lines
    if (sc.patterns.empty()) throw ValidationError("scenario has no patterns");

    double total = 0.0;
    for (const auto& p : sc.patterns) {
        if (p.day_type != "weekday" && p.day_type != "weekend")
            throw ValidationError("pattern '" + p.name + "': day_type must be weekday|weekend");
        if (!(p.prob > 0.0)) throw ValidationError("pattern '" + p.name + "': prob must be > 0");
        total += p.prob;
        if (p.steps.empty()) throw ValidationError("pattern '" + p.name + "' has no steps");
        for (std::size_t i = 0; i < p.steps.size(); ++i) {
            const Step& s = p.steps[i];
            const bool final = i + 1 == p.steps.size();
            if (!(s.mu - s.q > 0.0) || !(s.mu + s.q > 0.0))
                throw ValidationError("pattern '" + p.name + "': step durations mu±q must stay positive");
            if (s.eta < 0.0 || s.q < 0.0)
                throw ValidationError("pattern '" + p.name + "': eta and q must be >= 0");
            if (!final && s.eta > 0.0 && s.q == 0.0)
                throw ValidationError("pattern '" + p.name + "': eta > 0 needs a positive truncation half-width q");
            if (s.kind == StepKind::stay) {
                if (sc.find(s.place).kind != Kind::polygon)
                    throw ValidationError("pattern '" + p.name + "': stay '" + s.place + "' is not a polygon");
            } else {
                if (s.route.empty())
                    throw ValidationError("pattern '" + p.name + "': travel step has an empty route");
                for (const auto& id : s.route)
                    if (sc.find(id).kind != Kind::segment)
                        throw ValidationError("pattern '" + p.name + "': route id '" + id + "' is not a segment");
                route_polyline(sc, s.route); // throws when the chain breaks
            }
        }
        if (p.steps.back().kind != StepKind::stay)
            throw ValidationError("pattern '" + p.name + "': the absorbing final step must be a stay");
    }
    if (std::fabs(total - 1.0) > 1e-6)
        throw ValidationError("pattern probabilities must sum to 1");

    if (sc.defaults.n < 1 || sc.defaults.m < 2 || sc.defaults.sigma < 0.0)
        throw ValidationError("scenario defaults: need n >= 1, m >= 2, sigma >= 0");
    if (sc.defaults.spacing != "even" && sc.defaults.spacing != "realistic")
        throw ValidationError("scenario defaults: spacing must be even|realistic");
}

std::size_t sample_day_pattern(const std::string& day_type, const Scenario& sc, Rng& rng) {
    double total = 0.0;
    for (const auto& p : sc.patterns)
        if (p.day_type == day_type) total += p.prob;
    if (total <= 0.0)
        throw ValidationError("no patterns for day type '" + day_type + "'");
    const double u = rng.uniform() * total;
    double acc = 0.0;
    std::size_t last = sc.patterns.size();
    for (std::size_t i = 0; i < sc.patterns.size(); ++i) {
        if (sc.patterns[i].day_type != day_type) continue;
        last = i;
        acc += sc.patterns[i].prob;
        if (u < acc) return i;
    }
    return last; // u landed on the rounding sliver at the top
}

std::vector<double> sample_durations(const PatternSpec& pattern, Rng& rng, int* resamples) {
    const std::size_t k = pattern.steps.size();
    for (int attempt = 0; attempt < 100000; ++attempt) {
        std::vector<double> hours(k, 0.0);
        double used = 0.0;
        for (std::size_t i = 0; i + 1 < k; ++i) {
            const Step& s = pattern.steps[i];
            double d = s.mu;
            if (s.eta > 0.0) {
                do {
                    d = rng.gaussian(s.mu, s.eta);
                } while (!(d > s.mu - s.q && d < s.mu + s.q));
            }
            hours[i] = d;
            used += d;
        }
        const double rem = 24.0 - used;
        if (rem >= 0.0) {
            hours[k - 1] = rem;
            for (double& h : hours) h /= 24.0;
            return hours;
        }
        if (resamples) ++*resamples;
    }
    throw InfeasibleError("pattern '" + pattern.name + "': day durations keep exceeding 24 h");
}

RoutePath route_polyline(const Scenario& sc, const std::vector<std::string>& route) {
    constexpr double kJoin = 1e-9;
    auto same = [](const Point2D& a, const Point2D& b) {
        return std::fabs(a.x - b.x) <= kJoin && std::fabs(a.y - b.y) <= kJoin;
    };

    RoutePath rp;
    std::vector<std::vector<Point2D>> parts;
    for (const auto& id : route) {
        const Entity& e = sc.find(id);
        if (e.kind != Kind::segment)
            throw ValidationError("route id '" + id + "' is not a segment");
        parts.push_back(e.line);
    }

    if (parts.size() == 1) {
        rp.pts = parts[0];
    } else {
        // orient the first segment so its far end meets the second
        const auto& nxt = parts[1];
        const bool fwd = same(parts[0].back(), nxt.front()) || same(parts[0].back(), nxt.back());
        const bool rev = same(parts[0].front(), nxt.front()) || same(parts[0].front(), nxt.back());
        if (!fwd && !rev)
            throw ValidationError("route '" + route[0] + "' -> '" + route[1] + "' does not connect");
        rp.pts = parts[0];
        if (!fwd && rev) std::reverse(rp.pts.begin(), rp.pts.end());
        for (std::size_t i = 1; i < parts.size(); ++i) {
            std::vector<Point2D> piece = parts[i];
            if (same(rp.pts.back(), piece.back())) std::reverse(piece.begin(), piece.end());
            if (!same(rp.pts.back(), piece.front()))
                throw ValidationError("route '" + route[i - 1] + "' -> '" + route[i] +
                                      "' does not connect");
            rp.pts.insert(rp.pts.end(), piece.begin() + 1, piece.end());
        }
    }

    for (const auto& id : route) rp.seg_len.push_back(polyline_length(sc.find(id).line));
    rp.total = polyline_length(rp.pts);
    return rp;
}

DaySchedule build_schedule(const Scenario& sc, int day, const std::string& day_type,
                           std::size_t pattern, Rng& rng) {
    if (pattern >= sc.patterns.size()) throw ValidationError("pattern index out of range");
    const PatternSpec& p = sc.patterns[pattern];
    DaySchedule sched;
    sched.day = day;
    sched.day_type = day_type;
    sched.pattern = pattern;
    const std::vector<double> z = sample_durations(p, rng, &sched.resamples);

    double t = 0.0;
    for (std::size_t i = 0; i < p.steps.size(); ++i) {
        ScheduleItem item;
        item.kind = p.steps[i].kind;
        item.t0 = t;
        t += z[i];
        item.t1 = t;
        if (item.kind == StepKind::stay) {
            item.place = p.steps[i].place;
            item.place_idx = sc.index_of(item.place);
        } else {
            item.route = p.steps[i].route;
            RoutePath rp = route_polyline(sc, item.route);
            item.path = std::move(rp.pts);
            item.seg_len = std::move(rp.seg_len);
            item.path_len = rp.total;
        }
        sched.items.push_back(std::move(item));
    }
    sched.items.back().t1 = 1.0;
    return sched;
}

Point2D realize_position(const Scenario& sc, const DaySchedule& sched, double t, Rng& rng) {
    if (!(t >= 0.0 && t <= 1.0)) throw ValidationError("position time outside [0, 1]");
    if (sched.items.empty()) throw ValidationError("empty schedule");
    const ScheduleItem* item = &sched.items.back();
    for (const auto& it : sched.items)
        if (t < it.t1) {
            item = &it;
            break;
        }

    if (item->kind == StepKind::stay) {
        const Entity& e = sc.entities[item->place_idx];
        const BoundingBox box = e.bbox();
        for (int i = 0; i < 100000; ++i) {
            const Point2D p{rng.uniform(box.lo.x, box.hi.x), rng.uniform(box.lo.y, box.hi.y)};
            if (point_in_rings(p, e.rings)) return p;
        }
        throw InfeasibleError("could not place a point inside polygon '" + e.id + "'");
    }
    const double span = item->t1 - item->t0;
    const double frac = span > 0.0 ? (t - item->t0) / span : 0.0;
    return polyline_at(item->path, frac * item->path_len);
}

std::vector<double> gen_timestamps_even(int m) {
    if (m < 2) throw ValidationError("need m >= 2 observations");
    std::vector<double> t(static_cast<std::size_t>(m));
    for (int j = 1; j <= m; ++j)
        t[static_cast<std::size_t>(j - 1)] = static_cast<double>(j) / (m + 1.0);
    return t;
}

namespace {

double quantile_sorted(const std::vector<double>& v, double p) {
    const double h = (static_cast<double>(v.size()) - 1.0) * p;
    const std::size_t lo = static_cast<std::size_t>(h);
    const std::size_t hi = std::min(lo + 1, v.size() - 1);
    return v[lo] + (h - static_cast<double>(lo)) * (v[hi] - v[lo]);
}

double silverman_bandwidth(std::vector<double> v) {
    const double n = static_cast<double>(v.size());
    double mean = 0.0;
    for (double x : v) mean += x;
    mean /= n;
    double ss = 0.0;
    for (double x : v) ss += (x - mean) * (x - mean);
    const double sd = n > 1.0 ? std::sqrt(ss / (n - 1.0)) : 0.0;
    std::sort(v.begin(), v.end());
    const double iqr = quantile_sorted(v, 0.75) - quantile_sorted(v, 0.25);
    double spread = std::min(sd, iqr / 1.34);
    if (spread <= 0.0) spread = std::max(sd, 1e-6);
    return 0.9 * spread * std::pow(n, -0.2);
}

// Sort, nudge exact ties up by 1e-9, and keep everything inside [0, 1].
void make_strictly_increasing(std::vector<double>& t) {
    for (double& x : t) x = std::min(1.0, std::max(0.0, x));
    std::sort(t.begin(), t.end());
    for (std::size_t i = 1; i < t.size(); ++i)
        if (t[i] <= t[i - 1]) t[i] = t[i - 1] + 1e-9;
    if (t.back() > 1.0) {
        t.back() = 1.0;
        for (std::size_t i = t.size() - 1; i-- > 0;)
            if (t[i] >= t[i + 1]) t[i] = t[i + 1] - 1e-9;
    }
}

} // namespace

std::vector<double> gen_timestamps_realistic(int m, const std::vector<double>& reference,
                                             Rng& rng) {
    if (m < 2) throw ValidationError("need m >= 2 observations");
    if (reference.empty()) throw ValidationError("realistic spacing needs a reference day");

    std::vector<double> t;
    const std::size_t want = static_cast<std::size_t>(m);
    if (reference.size() > want) {
        // uniform thinning: every reference point equally likely to survive
        std::vector<std::size_t> idx(reference.size());
        for (std::size_t i = 0; i < idx.size(); ++i) idx[i] = i;
        for (std::size_t i = 0; i < want; ++i)
            std::swap(idx[i], idx[i + rng.below(idx.size() - i)]);
        for (std::size_t i = 0; i < want; ++i) t.push_back(reference[idx[i]]);
    } else {
        t = reference;
        const double bw = silverman_bandwidth(reference);
        while (t.size() < want)
            t.push_back(reference[rng.below(reference.size())] + bw * rng.gaussian());
    }
    make_strictly_increasing(t);
    return t;
}

std::vector<double> make_reference_day(Rng& rng) {
    const std::size_t size = 150 + rng.below(451);
    double centers[8];
    for (double& c : centers) c = rng.uniform(0.30, 0.92);

    std::vector<double> t;
    t.reserve(size);
    while (t.size() < size) {
        const double u = rng.uniform();
        if (u < 0.06) {
            // night: t < 0.27 or t > 0.95, proportional to window lengths
            const double v = rng.uniform() * 0.32;
            t.push_back(v < 0.27 ? v : 0.95 + (v - 0.27));
        } else if (u < 0.70) {
            const double x = rng.gaussian(centers[rng.below(8)], 0.015);
            if (x < 0.27 || x > 0.95) continue;
            t.push_back(x);
        } else {
            t.push_back(rng.uniform(0.27, 0.95));
        }
    }
    std::sort(t.begin(), t.end());
    return t;
}

void add_noise(std::vector<Point2D>& pts, double sigma, Rng& rng) {
    if (sigma < 0.0) throw ValidationError("noise sigma must be >= 0");
    if (sigma == 0.0) return;
    for (auto& p : pts) {
        p.x += sigma * rng.gaussian();
        p.y += sigma * rng.gaussian();
    }
}

DayTruth ground_truth(const Scenario& sc, const DaySchedule& sched) {
    // occupancy timeline, one interval per stay / per traversed segment
    std::vector<Visit> raw;
    for (const auto& item : sched.items) {
        if (item.kind == StepKind::stay) {
            raw.push_back({item.place, item.t0, item.t1, 0});
            continue;
        }
        double total = 0.0;
        for (double l : item.seg_len) total += l;
        double t = item.t0;
        for (std::size_t k = 0; k < item.route.size(); ++k) {
            const double dur = (item.t1 - item.t0) * item.seg_len[k] / total;
            const double end = k + 1 == item.route.size() ? item.t1 : t + dur;
            raw.push_back({item.route[k], t, end, 0});
            t = end;
        }
    }

    DayTruth out;
    for (const auto& v : raw) {
        if (!out.intervals.empty() && out.intervals.back().entity == v.entity)
            out.intervals.back().t1 = v.t1;
        else
            out.intervals.push_back(v);
    }
    for (const auto& v : out.intervals) {
        out.T[v.entity] += v.t1 - v.t0;
        out.visits[v.entity] += 1;
        int c = 2;
        if (v.t0 == 0.0) --c;
        if (v.t1 == 1.0) --c;
        out.crossings[v.entity] += c;
    }
    (void)sc;
    return out;
}

void count_observations(DayTruth& truth, const std::vector<double>& t) {
    for (auto& v : truth.intervals) v.observations = 0;
    for (double x : t)
        for (auto& v : truth.intervals)
            if (x >= v.t0 && (x < v.t1 || (v.t1 == 1.0 && x <= 1.0))) {
                ++v.observations;
                break;
            }
}

SimStudy simulate_study(const Scenario& sc, int n, int m, double sigma,
                        const std::string& spacing, std::uint64_t seed, int replicate,
                        int threads) {
    if (n < 1) throw ValidationError("need n >= 1 days");
    if (spacing != "even" && spacing != "realistic")
        throw ValidationError("spacing must be even|realistic");

    SimStudy study;
    study.seed = seed;
    study.replicate = replicate;
    study.days.resize(static_cast<std::size_t>(n));

    const Rng base = Rng(seed).stream(static_cast<std::uint64_t>(replicate));
    parallel_for(static_cast<std::size_t>(n), threads, [&](std::size_t di) {
        const int day = static_cast<int>(di) + 1;
        const Rng day_rng = base.stream(static_cast<std::uint64_t>(day));
        Rng pattern_rng = day_rng.stream(0);
        Rng duration_rng = day_rng.stream(1);
        Rng position_rng = day_rng.stream(2);
        Rng stamp_rng = day_rng.stream(3);
        Rng noise_rng = day_rng.stream(4);
        Rng reference_rng = day_rng.stream(5);

        SimDay& out = study.days[di];
        const std::string type = day_type_for(day);
        const std::size_t pat = sample_day_pattern(type, sc, pattern_rng);
        out.schedule = build_schedule(sc, day, type, pat, duration_rng);

        std::vector<double> t;
        if (spacing == "even") {
            t = gen_timestamps_even(m);
        } else {
            const std::vector<double> ref = make_reference_day(reference_rng);
            t = gen_timestamps_realistic(m, ref, stamp_rng);
        }

        out.true_pts.reserve(t.size());
        for (double x : t) out.true_pts.push_back(realize_position(sc, out.schedule, x, position_rng));

        out.gps.day = day;
        out.gps.t = t;
        out.gps.pts = out.true_pts;
        add_noise(out.gps.pts, sigma, noise_rng);

        out.truth = ground_truth(sc, out.schedule);
        count_observations(out.truth, t);
    });
    return study;
}

std::vector<GpsDay> study_gps(const SimStudy& study) {
    std::vector<GpsDay> days;
    days.reserve(study.days.size());
    for (const auto& d : study.days) days.push_back(d.gps);
    return days;
}

void write_truth_csv(const SimStudy& study, const Scenario& sc, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw ValidationError("cannot write '" + path + "'");
    out << "day,entity-id,kind,proportion,visits,crossings\n";
    char buf[160];
    for (const auto& d : study.days)
        for (const auto& [id, prop] : d.truth.T) {
            std::snprintf(buf, sizeof buf, "%d,%s,%s,%.12g,%d,%d\n", d.schedule.day, id.c_str(),
                          kind_name(sc.find(id).kind), prop, d.truth.visits.at(id),
                          d.truth.crossings.at(id));
            out << buf;
        }
}

void write_days_csv(const SimStudy& study, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw ValidationError("cannot write '" + path + "'");
    out << "day,day-type,pattern,resamples\n";
    for (const auto& d : study.days)
        out << d.schedule.day << ',' << d.schedule.day_type << ',' << d.schedule.pattern << ','
            << d.schedule.resamples << '\n';
}

void write_diagnostics_csv(const SimStudy& study, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw ValidationError("cannot write '" + path + "'");
    out << "day,entity-id,visit-start,visit-end,observations\n";
    char buf[160];
    for (const auto& d : study.days)
        for (const auto& v : d.truth.intervals)
            if (v.observations == 0) {
                std::snprintf(buf, sizeof buf, "%d,%s,%.12g,%.12g,%d\n", d.schedule.day,
                              v.entity.c_str(), v.t0, v.t1, v.observations);
                out << buf;
            }
}

} // namespace pnact
