// Command-line front end: each subcommand wires the library into one
// reproducible pipeline step and drops a manifest next to its outputs.
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <set>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "pnact/activity_space.hpp"
#include "pnact/clustering.hpp"
#include "pnact/errors.hpp"
#include "pnact/estimation.hpp"
#include "pnact/eval.hpp"
#include "pnact/geojson.hpp"
#include "pnact/gps.hpp"
#include "pnact/ingest.hpp"
#include "pnact/simulator.hpp"
#include "pnact/stability.hpp"
#include "pnact/svg.hpp"

namespace fs = std::filesystem;
using nlohmann::json;
using nlohmann::ordered_json;

namespace {

constexpr const char* kVersion = "0.1.0";

std::uint64_t fnv1a(const std::string& s) {
    std::uint64_t h = 0xcbf29ce484222325ull;
    for (unsigned char c : s) {
        h ^= c;
        h *= 0x100000001b3ull;
    }
    return h;
}

json load_json_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw pnact::ValidationError("cannot open '" + path + "'");
    try {
        json j;
        in >> j;
        return j;
    } catch (const json::exception& e) {
        throw pnact::ValidationError("'" + path + "': " + e.what());
    }
}

// Config file supplies values for flags the user did not pass; flags win.
template <typename T>
void config_fill(CLI::App* cmd, const json& cfg, const std::string& flag, T& value) {
    const std::string key = flag.substr(2); // strip "--"
    if (!cfg.contains(key)) return;
    const CLI::Option* opt = cmd->get_option(flag);
    if (opt->count() > 0) return;
    try {
        value = cfg.at(key).get<T>();
    } catch (const json::exception& e) {
        throw pnact::ValidationError("config key '" + key + "': " + e.what());
    }
}

std::string out_path(const std::string& dir, const std::string& name) {
    return (fs::path(dir) / name).string();
}

void write_manifest(const std::string& dir, const std::string& command,
                    const ordered_json& params, const std::vector<std::string>& inputs,
                    const std::vector<std::string>& outputs) {
    ordered_json m;
    m["command"] = command;
    m["version"] = kVersion;
    m["parameters"] = params;
    char hash[32];
    std::snprintf(hash, sizeof hash, "%016llx",
                  static_cast<unsigned long long>(fnv1a(params.dump())));
    m["config_hash"] = hash;
    m["inputs"] = inputs;
    m["outputs"] = outputs;
    std::ofstream out(out_path(dir, "manifest.json"));
    if (!out) throw pnact::ValidationError("cannot write manifest in '" + dir + "'");
    out << m.dump(2) << "\n";
}

std::vector<pnact::MarkedDay> marked_days(const std::string& gps_path, const pnact::PNSpace& pn,
                                          pnact::ParseReport* report = nullptr) {
    const std::vector<pnact::GpsDay> days = pnact::parse_gps_file(gps_path, report);
    if (days.empty()) throw pnact::ValidationError("'" + gps_path + "': no usable days");
    std::vector<pnact::MarkedDay> out;
    out.reserve(days.size());
    for (const auto& d : days) out.push_back(pnact::assign(d, pn));
    return out;
}

pnact::Kind class_from_string(const std::string& s) {
    if (s == "polygon") return pnact::Kind::polygon;
    if (s == "road" || s == "segment") return pnact::Kind::segment;
    throw pnact::ValidationError("unknown class '" + s + "' (use polygon|road)");
}

struct CommonOpts {
    std::string config_path;
    std::string out_dir = ".";
    int threads = 1;
};

void add_common(CLI::App* cmd, CommonOpts& c) {
    cmd->add_option("--config", c.config_path, "JSON config; flags override its values");
    cmd->add_option("--out", c.out_dir, "output directory");
    cmd->add_option("--threads", c.threads, "worker cap for parallel sections");
}

json resolve_common(CLI::App* cmd, CommonOpts& c) {
    json cfg = json::object();
    if (!c.config_path.empty()) cfg = load_json_file(c.config_path);
    config_fill(cmd, cfg, "--out", c.out_dir);
    config_fill(cmd, cfg, "--threads", c.threads);
    if (c.threads < 1) throw pnact::ValidationError("--threads must be >= 1");
    fs::create_directories(c.out_dir);
    return cfg;
}

// ---------------------------------------------------------------- simulate

struct SimulateOpts {
    CommonOpts common;
    std::string scenario;
    int n = -1, m = -1;
    double sigma = -1.0;
    std::string spacing;
    std::uint64_t seed = 0;
    bool seed_set = false;
};

int run_simulate(CLI::App* cmd, SimulateOpts& o) {
    const json cfg = resolve_common(cmd, o.common);
    config_fill(cmd, cfg, "--scenario", o.scenario);
    if (o.scenario.empty()) throw pnact::ValidationError("simulate needs --scenario");
    const pnact::Scenario sc = pnact::load_scenario(o.scenario);

    int n = sc.defaults.n, m = sc.defaults.m;
    double sigma = sc.defaults.sigma;
    std::string spacing = sc.defaults.spacing;
    std::uint64_t seed = sc.defaults.seed;
    if (cfg.contains("n")) n = cfg["n"].get<int>();
    if (cfg.contains("m")) m = cfg["m"].get<int>();
    if (cfg.contains("sigma")) sigma = cfg["sigma"].get<double>();
    if (cfg.contains("spacing")) spacing = cfg["spacing"].get<std::string>();
    if (cfg.contains("seed")) seed = cfg["seed"].get<std::uint64_t>();
    if (cmd->get_option("--n")->count()) n = o.n;
    if (cmd->get_option("--m")->count()) m = o.m;
    if (cmd->get_option("--sigma")->count()) sigma = o.sigma;
    if (cmd->get_option("--spacing")->count()) spacing = o.spacing;
    if (cmd->get_option("--seed")->count()) seed = o.seed;

    const pnact::SimStudy study =
        pnact::simulate_study(sc, n, m, sigma, spacing, seed, 0, o.common.threads);

    const std::string& dir = o.common.out_dir;
    pnact::write_gps_csv(pnact::study_gps(study), out_path(dir, "gps.csv"));
    pnact::write_truth_csv(study, sc, out_path(dir, "truth.csv"));
    pnact::write_days_csv(study, out_path(dir, "days.csv"));
    pnact::write_diagnostics_csv(study, out_path(dir, "diagnostics.csv"));

    ordered_json params{{"scenario", o.scenario}, {"n", n},       {"m", m},
                        {"sigma", sigma},         {"spacing", spacing}, {"seed", seed},
                        {"threads", o.common.threads}};
    if (spacing == "realistic") params["reference"] = "synthetic";
    write_manifest(dir, "simulate", params, {o.scenario},
                   {"gps.csv", "truth.csv", "days.csv", "diagnostics.csv"});
    std::cout << "simulate: " << study.days.size() << " days -> " << dir << "\n";
    return 0;
}

// ---------------------------------------------------------------- estimate

struct EstimateOpts {
    CommonOpts common;
    std::string gps, entities;
    std::string mode = "weighted";
    double epsilon = 0.1;
};

int run_estimate(CLI::App* cmd, EstimateOpts& o) {
    const json cfg = resolve_common(cmd, o.common);
    config_fill(cmd, cfg, "--gps", o.gps);
    config_fill(cmd, cfg, "--entities", o.entities);
    config_fill(cmd, cfg, "--mode", o.mode);
    config_fill(cmd, cfg, "--epsilon", o.epsilon);
    if (o.gps.empty() || o.entities.empty())
        throw pnact::ValidationError("estimate needs --gps and --entities");

    const pnact::PNSpace pn(pnact::load_entities(o.entities));
    const auto days = marked_days(o.gps, pn);
    const pnact::EstimatorMode mode = pnact::estimator_mode_from_string(o.mode);
    const pnact::TimeUseTable table = pnact::estimate(days, pn, mode, o.epsilon);

    const std::string& dir = o.common.out_dir;
    pnact::write_timeuse_csv(table, out_path(dir, "timeuse.csv"));
    std::ofstream(out_path(dir, "timeuse.json")) << pnact::timeuse_to_json(table) << "\n";

    ordered_json params{{"gps", o.gps},
                        {"entities", o.entities},
                        {"mode", o.mode},
                        {"epsilon", o.epsilon},
                        {"threads", o.common.threads}};
    write_manifest(dir, "estimate", params, {o.gps, o.entities},
                   {"timeuse.csv", "timeuse.json"});
    std::cout << "estimate: " << days.size() << " days, " << table.cells.size()
              << " entities -> " << dir << "\n";
    return 0;
}

// ---------------------------------------------------------- activity-space

struct SpaceOpts {
    CommonOpts common;
    std::string table;
    std::vector<double> gammas{0.5, 0.9, 0.95, 0.99};
    std::string weights; // optional JSON {id: weight}
};

int run_activity_space(CLI::App* cmd, SpaceOpts& o) {
    const json cfg = resolve_common(cmd, o.common);
    config_fill(cmd, cfg, "--table", o.table);
    config_fill(cmd, cfg, "--gamma", o.gammas);
    config_fill(cmd, cfg, "--weights", o.weights);
    if (o.table.empty()) throw pnact::ValidationError("activity-space needs --table");

    const pnact::TimeUseTable table = pnact::read_timeuse_csv(o.table);
    const pnact::ClassTables classes = pnact::normalize_by_class(table);

    std::map<std::string, double, pnact::NaturalLess> weights;
    if (!o.weights.empty()) {
        const json w = load_json_file(o.weights);
        for (const auto& [id, v] : w.items()) weights[id] = v.get<double>();
    }

    std::vector<pnact::ActivitySpace> spaces;
    for (const double g : o.gammas) {
        spaces.push_back(pnact::level_space(table.proportions(), g, "all"));
        if (!classes.polygon.empty_class)
            spaces.push_back(pnact::level_space(classes.polygon.prop, g, "polygon"));
        if (!classes.road.empty_class)
            spaces.push_back(pnact::level_space(classes.road.prop, g, "road"));
        spaces.push_back(pnact::composed_space(classes.polygon.prop, classes.road.prop, g));
        if (!weights.empty()) {
            if (!classes.polygon.empty_class) {
                auto s = pnact::weighted_level_space(classes.polygon.prop, weights, g);
                s.cls = "polygon-weighted";
                spaces.push_back(std::move(s));
            }
            if (!classes.road.empty_class) {
                auto s = pnact::weighted_level_space(classes.road.prop, weights, g);
                s.cls = "road-weighted";
                spaces.push_back(std::move(s));
            }
        }
    }

    const std::string& dir = o.common.out_dir;
    std::ofstream(out_path(dir, "activity-spaces.json"))
        << pnact::activity_spaces_to_json(spaces) << "\n";

    ordered_json params{{"table", o.table}, {"gamma", o.gammas}, {"threads", o.common.threads}};
    if (!o.weights.empty()) params["weights"] = o.weights;
    write_manifest(dir, "activity-space", params, {o.table}, {"activity-spaces.json"});
    std::cout << "activity-space: " << spaces.size() << " spaces -> " << dir << "\n";
    return 0;
}

// ----------------------------------------------------------------- cluster

struct ClusterOpts {
    CommonOpts common;
    std::string gps, entities;
    double tau = 0.01;
    std::size_t k = 0;
    double height = -1.0;
    double alpha = 2.0;
};

int run_cluster(CLI::App* cmd, ClusterOpts& o) {
    const json cfg = resolve_common(cmd, o.common);
    config_fill(cmd, cfg, "--gps", o.gps);
    config_fill(cmd, cfg, "--entities", o.entities);
    config_fill(cmd, cfg, "--tau", o.tau);
    config_fill(cmd, cfg, "--k", o.k);
    config_fill(cmd, cfg, "--height", o.height);
    config_fill(cmd, cfg, "--alpha", o.alpha);
    if (o.gps.empty() || o.entities.empty())
        throw pnact::ValidationError("cluster needs --gps and --entities");

    const pnact::PNSpace pn(pnact::load_entities(o.entities));
    const auto days = marked_days(o.gps, pn);

    std::vector<pnact::DayPattern> patterns;
    std::vector<int> day_ids;
    for (const auto& d : days) {
        patterns.push_back(pnact::remove_jitter_loops(pnact::compress(d, pn), o.tau));
        day_ids.push_back(d.day);
    }

    const auto matrix = pnact::distance_matrix(patterns, o.common.threads);
    const pnact::Linkage linkage = pnact::single_linkage(matrix);
    std::vector<int> labels;
    if (o.k > 0)
        labels = pnact::cut_k(linkage, o.k);
    else if (o.height >= 0.0)
        labels = pnact::cut_height(linkage, o.height);
    else
        labels.assign(patterns.size(), 0);
    const auto outliers = pnact::flag_outliers(matrix, o.alpha);

    const std::string& dir = o.common.out_dir;
    pnact::write_matrix_csv(matrix, out_path(dir, "distance-matrix.csv"));
    std::ofstream(out_path(dir, "linkage.json")) << pnact::linkage_to_json(linkage) << "\n";
    pnact::write_labels_csv(day_ids, labels, outliers, out_path(dir, "clusters.csv"));

    ordered_json params{{"gps", o.gps},   {"entities", o.entities}, {"tau", o.tau},
                        {"k", o.k},       {"height", o.height},     {"alpha", o.alpha},
                        {"threads", o.common.threads}};
    write_manifest(dir, "cluster", params, {o.gps, o.entities},
                   {"distance-matrix.csv", "linkage.json", "clusters.csv"});
    std::cout << "cluster: " << patterns.size() << " days, " << outliers.size()
              << " outliers -> " << dir << "\n";
    return 0;
}

// --------------------------------------------------------------- stability

struct StabilityOpts {
    CommonOpts common;
    std::string gps, entities;
    std::vector<std::string> classes{"polygon", "road"};
    std::vector<double> levels{0.5, 0.9, 0.95, 0.99};
    std::vector<double> xis{0.05, 0.1, 0.2};
};

int run_stability(CLI::App* cmd, StabilityOpts& o) {
    const json cfg = resolve_common(cmd, o.common);
    config_fill(cmd, cfg, "--gps", o.gps);
    config_fill(cmd, cfg, "--entities", o.entities);
    config_fill(cmd, cfg, "--classes", o.classes);
    config_fill(cmd, cfg, "--levels", o.levels);
    config_fill(cmd, cfg, "--xis", o.xis);
    if (o.gps.empty() || o.entities.empty())
        throw pnact::ValidationError("stability needs --gps and --entities");

    const pnact::PNSpace pn(pnact::load_entities(o.entities));
    const auto days = marked_days(o.gps, pn);

    std::vector<pnact::StabilitySeries> series;
    for (const auto& cls : o.classes) {
        auto s = pnact::stability_series(days, pn, class_from_string(cls), o.levels);
        series.insert(series.end(), s.begin(), s.end());
    }
    const auto curve = pnact::lct_curve(series, o.xis);

    const std::string& dir = o.common.out_dir;
    pnact::write_ratios_csv(series, out_path(dir, "stability-ratios.csv"));
    pnact::write_lct_csv(curve, out_path(dir, "stability-lct.csv"));

    ordered_json params{{"gps", o.gps},       {"entities", o.entities}, {"classes", o.classes},
                        {"levels", o.levels}, {"xis", o.xis},           {"threads", o.common.threads}};
    write_manifest(dir, "stability", params, {o.gps, o.entities},
                   {"stability-ratios.csv", "stability-lct.csv"});
    std::cout << "stability: " << series.size() << " series over " << days.size()
              << " days -> " << dir << "\n";
    return 0;
}

// ---------------------------------------------------------------- evaluate

struct EvaluateOpts {
    CommonOpts common;
    std::string scenario;
    std::vector<int> n_values{7, 30, 90};
    std::vector<int> m_values{159, 479, 1439};
    double sigma = 0.1;
    std::string spacing = "even";
    double epsilon = 0.1;
    int replicates = 50;
    std::uint64_t seed = 1;
    bool convergence = false;
};

int run_evaluate(CLI::App* cmd, EvaluateOpts& o) {
    const json cfg = resolve_common(cmd, o.common);
    config_fill(cmd, cfg, "--scenario", o.scenario);
    config_fill(cmd, cfg, "--n-values", o.n_values);
    config_fill(cmd, cfg, "--m-values", o.m_values);
    config_fill(cmd, cfg, "--sigma", o.sigma);
    config_fill(cmd, cfg, "--spacing", o.spacing);
    config_fill(cmd, cfg, "--epsilon", o.epsilon);
    config_fill(cmd, cfg, "--replicates", o.replicates);
    config_fill(cmd, cfg, "--seed", o.seed);
    if (o.scenario.empty()) throw pnact::ValidationError("evaluate needs --scenario");

    const pnact::Scenario sc = pnact::load_scenario(o.scenario);
    pnact::ExperimentGrid grid;
    grid.n_values = o.n_values;
    grid.m_values = o.m_values;
    grid.sigma = o.sigma;
    grid.spacing = o.spacing;
    grid.epsilon = o.epsilon;
    grid.replicates = o.replicates;
    grid.seed = o.seed;
    grid.threads = o.common.threads;

    const auto rows = pnact::run_comparison(sc, grid);
    const std::string& dir = o.common.out_dir;
    pnact::write_results_csv(rows, out_path(dir, "results.csv"));
    std::vector<std::string> outputs{"results.csv"};

    if (o.convergence) {
        if (o.n_values.size() < 3)
            throw pnact::ValidationError("--convergence needs at least 3 n values");
        std::vector<double> xs, ys;
        for (const auto& r : rows)
            if (r.m == o.m_values.front() && r.spacing == grid.spacing) {
                xs.push_back(r.n);
                ys.push_back(r.weighted);
            }
        const double slope = pnact::fit_loglog_slope(xs, ys);
        ordered_json conv{{"m", o.m_values.front()},
                          {"n_values", o.n_values},
                          {"estimator", "weighted"},
                          {"slope", slope}};
        std::ofstream(out_path(dir, "convergence.json")) << conv.dump(2) << "\n";
        outputs.push_back("convergence.json");
        std::cout << "convergence slope: " << slope << "\n";
    }

    ordered_json params{{"scenario", o.scenario}, {"n_values", o.n_values},
                        {"m_values", o.m_values}, {"sigma", o.sigma},
                        {"spacing", o.spacing},   {"epsilon", o.epsilon},
                        {"replicates", o.replicates}, {"seed", o.seed},
                        {"threads", o.common.threads}};
    if (o.spacing == "realistic") params["reference"] = "synthetic";
    write_manifest(dir, "evaluate", params, {o.scenario}, outputs);
    std::cout << "evaluate: " << rows.size() << " grid cells -> " << dir << "\n";
    return 0;
}

// ------------------------------------------------------------------ ingest

struct IngestOpts {
    CommonOpts common;
    std::string gps, polygons, network;
    double theta = 0.05;
    double r = 0.001;
    double d0 = 0.01;
    double cutoff = 0.001;
};

int run_ingest(CLI::App* cmd, IngestOpts& o) {
    const json cfg = resolve_common(cmd, o.common);
    config_fill(cmd, cfg, "--gps", o.gps);
    config_fill(cmd, cfg, "--polygons", o.polygons);
    config_fill(cmd, cfg, "--network", o.network);
    config_fill(cmd, cfg, "--theta", o.theta);
    config_fill(cmd, cfg, "--r", o.r);
    config_fill(cmd, cfg, "--d0", o.d0);
    config_fill(cmd, cfg, "--cutoff", o.cutoff);
    if (o.gps.empty() || o.polygons.empty() || o.network.empty())
        throw pnact::ValidationError("ingest needs --gps, --polygons and --network");

    pnact::ParseReport report;
    const std::vector<pnact::GpsDay> days = pnact::parse_gps_file(o.gps, &report);
    if (days.empty()) throw pnact::ValidationError("'" + o.gps + "': no usable days");
    const double n = static_cast<double>(days.size());

    std::vector<pnact::WeightedPoint> weighted;
    std::vector<pnact::Point2D> pts;
    for (const auto& d : days) {
        const std::vector<double> marks = pnact::compute_marks(d.t);
        for (std::size_t j = 0; j < d.pts.size(); ++j) {
            weighted.push_back({d.pts[j], marks[j] / n});
            pts.push_back(d.pts[j]);
        }
    }

    const std::vector<pnact::Entity> polygons = pnact::load_entities(o.polygons);
    const std::vector<pnact::Entity> network = pnact::load_entities(o.network);

    const pnact::BoundingBox box = pnact::bounding_box_search(weighted, o.theta, o.r);
    double total_w = 0.0, box_w = 0.0;
    for (const auto& wp : weighted) {
        total_w += wp.w;
        if (pnact::box_contains(box.lo, o.theta, wp.p)) box_w += wp.w;
    }
    const double coverage = pnact::road_coverage(pts, network, o.d0);
    const std::vector<pnact::Entity> selected = pnact::select_polygons(pts, polygons, o.d0);
    const auto aggregated = pnact::aggregate_polygons(selected, o.cutoff);

    const std::string& dir = o.common.out_dir;
    pnact::save_entities_geojson(selected, out_path(dir, "selected-polygons.geojson"));
    std::vector<pnact::Entity> agg_entities;
    for (const auto& a : aggregated) agg_entities.push_back(a.entity);
    pnact::save_entities_geojson(agg_entities, out_path(dir, "aggregated-polygons.geojson"));

    ordered_json rep;
    rep["days"] = days.size();
    rep["records"] = pts.size();
    rep["duplicates_collapsed"] = report.duplicates_collapsed;
    rep["dropped_empty_days"] = report.dropped_empty;
    rep["rejected_days"] = report.rejected;
    rep["box"] = {{"lo", {box.lo.x, box.lo.y}},
                  {"theta", o.theta},
                  {"captured_weight", total_w > 0.0 ? box_w / total_w : 0.0}};
    rep["road_coverage"] = coverage;
    ordered_json sel = ordered_json::array();
    for (const auto& e : selected) sel.push_back(e.id);
    rep["selected_polygons"] = sel;
    ordered_json agg = ordered_json::array();
    for (const auto& a : aggregated)
        agg.push_back({{"id", a.entity.id}, {"members", a.members}});
    rep["aggregated"] = agg;
    std::ofstream(out_path(dir, "ingest.json")) << rep.dump(2) << "\n";

    ordered_json params{{"gps", o.gps},     {"polygons", o.polygons}, {"network", o.network},
                        {"theta", o.theta}, {"r", o.r},               {"d0", o.d0},
                        {"cutoff", o.cutoff}, {"threads", o.common.threads}};
    write_manifest(dir, "ingest", params, {o.gps, o.polygons, o.network},
                   {"ingest.json", "selected-polygons.geojson", "aggregated-polygons.geojson"});
    std::cout << "ingest: " << pts.size() << " records over " << days.size() << " days, coverage "
              << coverage << " -> " << dir << "\n";
    return 0;
}

// ---------------------------------------------------------- privacy-render

struct PrivacyOpts {
    CommonOpts common;
    std::string gps, polygons, network;
    double r0 = 0.01;
    double q = 0.5;
    double side = 0.02;
    std::uint64_t seed = 1;
};

int run_privacy(CLI::App* cmd, PrivacyOpts& o) {
    const json cfg = resolve_common(cmd, o.common);
    config_fill(cmd, cfg, "--gps", o.gps);
    config_fill(cmd, cfg, "--polygons", o.polygons);
    config_fill(cmd, cfg, "--network", o.network);
    config_fill(cmd, cfg, "--r0", o.r0);
    config_fill(cmd, cfg, "--q", o.q);
    config_fill(cmd, cfg, "--side", o.side);
    config_fill(cmd, cfg, "--seed", o.seed);
    if (o.gps.empty() || o.polygons.empty() || o.network.empty())
        throw pnact::ValidationError("privacy-render needs --gps, --polygons and --network");

    const std::vector<pnact::GpsDay> days = pnact::parse_gps_file(o.gps);
    std::vector<pnact::Point2D> pts;
    for (const auto& d : days) pts.insert(pts.end(), d.pts.begin(), d.pts.end());

    const std::vector<pnact::Entity> polygons = pnact::load_entities(o.polygons);
    const std::vector<pnact::Entity> network = pnact::load_entities(o.network);

    const pnact::ThinnedNetwork thinned = pnact::privacy_thin_roads(network, pts, o.r0, o.q, o.seed);
    const std::vector<pnact::Entity> reshaped = pnact::privacy_reshape_polygons(polygons, o.side);

    std::vector<pnact::Entity> private_map = reshaped;
    private_map.insert(private_map.end(), thinned.kept.begin(), thinned.kept.end());

    const std::string& dir = o.common.out_dir;
    pnact::write_thinning_csv(thinned.decisions, out_path(dir, "thinning.csv"));
    pnact::save_entities_geojson(private_map, out_path(dir, "private-map.geojson"));

    ordered_json params{{"gps", o.gps}, {"polygons", o.polygons}, {"network", o.network},
                        {"r0", o.r0},   {"q", o.q},               {"side", o.side},
                        {"seed", o.seed}, {"threads", o.common.threads}};
    write_manifest(dir, "privacy-render", params, {o.gps, o.polygons, o.network},
                   {"thinning.csv", "private-map.geojson"});
    std::cout << "privacy-render: kept " << thinned.kept.size() << "/" << network.size()
              << " segments -> " << dir << "\n";
    return 0;
}

// -------------------------------------------------------------------- plot

struct PlotOpts {
    CommonOpts common;
    std::string kind;
    std::string input;
    std::string svg = "plot.svg";
};

int run_plot(CLI::App* cmd, PlotOpts& o) {
    const json cfg = resolve_common(cmd, o.common);
    config_fill(cmd, cfg, "--kind", o.kind);
    config_fill(cmd, cfg, "--in", o.input);
    config_fill(cmd, cfg, "--svg", o.svg);
    if (o.kind.empty() || o.input.empty())
        throw pnact::ValidationError("plot needs --kind and --in");

    const std::string target = out_path(o.common.out_dir, o.svg);
    if (o.kind == "timeuse") {
        pnact::svg_timeuse_bars(pnact::read_timeuse_csv(o.input), target);
    } else if (o.kind == "dendrogram") {
        std::ifstream in(o.input);
        if (!in) throw pnact::ValidationError("cannot open '" + o.input + "'");
        std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
        pnact::svg_dendrogram(pnact::linkage_from_json(text), target);
    } else if (o.kind == "lct") {
        pnact::svg_lct_curves(pnact::read_ratios_csv(o.input), target);
    } else {
        throw pnact::ValidationError("unknown plot kind '" + o.kind +
                                     "' (use timeuse|dendrogram|lct)");
    }

    ordered_json params{{"kind", o.kind}, {"in", o.input}, {"svg", o.svg}};
    write_manifest(o.common.out_dir, "plot", params, {o.input}, {o.svg});
    std::cout << "plot: " << o.kind << " -> " << target << "\n";
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"polygon-network activity-space toolkit"};
    app.set_version_flag("--version", kVersion);
    app.require_subcommand(0, 1);

    SimulateOpts sim_o;
    CLI::App* sim = app.add_subcommand("simulate", "generate a synthetic GPS study");
    add_common(sim, sim_o.common);
    sim->add_option("--scenario", sim_o.scenario, "scenario JSON (map, patterns, defaults)");
    sim->add_option("--n", sim_o.n, "days");
    sim->add_option("--m", sim_o.m, "observations per day");
    sim->add_option("--sigma", sim_o.sigma, "GPS noise sd");
    sim->add_option("--spacing", sim_o.spacing, "even|realistic");
    sim->add_option("--seed", sim_o.seed, "RNG seed");

    EstimateOpts est_o;
    CLI::App* est = app.add_subcommand("estimate", "time-use table from GPS + entities");
    add_common(est, est_o.common);
    est->add_option("--gps", est_o.gps, "GPS CSV");
    est->add_option("--entities", est_o.entities, "GeoJSON or vertex CSV");
    est->add_option("--mode", est_o.mode, "naive|weighted|adjusted");
    est->add_option("--epsilon", est_o.epsilon, "boundary-adjustment distance");

    SpaceOpts spc_o;
    CLI::App* spc = app.add_subcommand("activity-space", "level-gamma spaces from a table");
    add_common(spc, spc_o.common);
    spc->add_option("--table", spc_o.table, "timeuse.csv");
    spc->add_option("--gamma", spc_o.gammas, "coverage levels")->delimiter(',');
    spc->add_option("--weights", spc_o.weights, "JSON {entity-id: weight}");

    ClusterOpts clu_o;
    CLI::App* clu = app.add_subcommand("cluster", "daily-pattern distance matrix + linkage");
    add_common(clu, clu_o.common);
    clu->add_option("--gps", clu_o.gps, "GPS CSV");
    clu->add_option("--entities", clu_o.entities, "GeoJSON or vertex CSV");
    clu->add_option("--tau", clu_o.tau, "jitter-loop mass threshold");
    clu->add_option("--k", clu_o.k, "cut the dendrogram into k clusters");
    clu->add_option("--height", clu_o.height, "or cut at this height");
    clu->add_option("--alpha", clu_o.alpha, "outlier flag: mean + alpha*sd");

    StabilityOpts sta_o;
    CLI::App* sta = app.add_subcommand("stability", "activity-space stability over days");
    add_common(sta, sta_o.common);
    sta->add_option("--gps", sta_o.gps, "GPS CSV");
    sta->add_option("--entities", sta_o.entities, "GeoJSON or vertex CSV");
    sta->add_option("--classes", sta_o.classes, "polygon,road")->delimiter(',');
    sta->add_option("--levels", sta_o.levels, "coverage levels c")->delimiter(',');
    sta->add_option("--xis", sta_o.xis, "LCT tolerances")->delimiter(',');

    EvaluateOpts eva_o;
    CLI::App* eva = app.add_subcommand("evaluate", "estimator-comparison Monte Carlo grid");
    add_common(eva, eva_o.common);
    eva->add_option("--scenario", eva_o.scenario, "scenario JSON");
    eva->add_option("--n-values", eva_o.n_values, "study sizes")->delimiter(',');
    eva->add_option("--m-values", eva_o.m_values, "observations per day")->delimiter(',');
    eva->add_option("--sigma", eva_o.sigma, "GPS noise sd");
    eva->add_option("--spacing", eva_o.spacing, "even|realistic");
    eva->add_option("--epsilon", eva_o.epsilon, "adjustment distance");
    eva->add_option("--replicates", eva_o.replicates, "Monte Carlo replicates");
    eva->add_option("--seed", eva_o.seed, "RNG seed");
    eva->add_flag("--convergence", eva_o.convergence, "fit log-log RMISE slope over n");

    IngestOpts ing_o;
    CLI::App* ing = app.add_subcommand("ingest", "GPS + GIS preprocessing report");
    add_common(ing, ing_o.common);
    ing->add_option("--gps", ing_o.gps, "GPS CSV");
    ing->add_option("--polygons", ing_o.polygons, "candidate polygons (GeoJSON/CSV)");
    ing->add_option("--network", ing_o.network, "road segments (GeoJSON/CSV)");
    ing->add_option("--theta", ing_o.theta, "study-box side");
    ing->add_option("--r", ing_o.r, "box-search lattice step");
    ing->add_option("--d0", ing_o.d0, "selection / coverage distance");
    ing->add_option("--cutoff", ing_o.cutoff, "polygon aggregation distance");

    PrivacyOpts pri_o;
    CLI::App* pri = app.add_subcommand("privacy-render", "publication-safe map rendering");
    add_common(pri, pri_o.common);
    pri->add_option("--gps", pri_o.gps, "GPS CSV");
    pri->add_option("--polygons", pri_o.polygons, "polygons to reshape");
    pri->add_option("--network", pri_o.network, "road segments to thin");
    pri->add_option("--r0", pri_o.r0, "protect segments within this distance of data");
    pri->add_option("--q", pri_o.q, "removal probability for eligible segments");
    pri->add_option("--side", pri_o.side, "square side for reshaped polygons");
    pri->add_option("--seed", pri_o.seed, "RNG seed");

    PlotOpts plt_o;
    CLI::App* plt = app.add_subcommand("plot", "static SVGs from serialized outputs");
    add_common(plt, plt_o.common);
    plt->add_option("--kind", plt_o.kind, "timeuse|dendrogram|lct");
    plt->add_option("--in", plt_o.input, "module output file");
    plt->add_option("--svg", plt_o.svg, "output file name");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForVersion& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 1;
    }

    try {
        if (app.got_subcommand(sim)) return run_simulate(sim, sim_o);
        if (app.got_subcommand(est)) return run_estimate(est, est_o);
        if (app.got_subcommand(spc)) return run_activity_space(spc, spc_o);
        if (app.got_subcommand(clu)) return run_cluster(clu, clu_o);
        if (app.got_subcommand(sta)) return run_stability(sta, sta_o);
        if (app.got_subcommand(eva)) return run_evaluate(eva, eva_o);
        if (app.got_subcommand(ing)) return run_ingest(ing, ing_o);
        if (app.got_subcommand(pri)) return run_privacy(pri, pri_o);
        if (app.got_subcommand(plt)) return run_plot(plt, plt_o);
        std::cerr << app.help();
        return 1;
    } catch (const pnact::InfeasibleError& e) {
        std::cerr << "infeasible: " << e.what() << "\n";
        return 3;
    } catch (const pnact::ValidationError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
}
