#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <map>
#include <memory>
#include <string>
#include <vector>

#include "pnact/activity_space.hpp"
#include "pnact/clustering.hpp"
#include "pnact/errors.hpp"
#include "pnact/estimation.hpp"
#include "pnact/eval.hpp"
#include "pnact/geojson.hpp"
#include "pnact/gps.hpp"
#include "pnact/pnspace.hpp"
#include "pnact/simulator.hpp"

namespace py = pybind11;
using namespace pnact;

namespace {

Proportions to_props(const py::dict& d) {
    Proportions out;
    for (auto item : d)
        out[py::cast<std::string>(item.first)] = py::cast<double>(item.second);
    return out;
}

py::dict from_props(const std::map<std::string, double, NaturalLess>& m) {
    py::dict out;
    for (const auto& [id, v] : m) out[py::str(id)] = v;
    return out;
}

py::dict space_to_dict(const ActivitySpace& s) {
    py::dict out;
    out["gamma"] = s.gamma;
    out["class"] = s.cls;
    out["members"] = s.members;
    out["mass"] = s.mass;
    if (s.total_weight > 0.0 || s.heuristic) {
        out["total_weight"] = s.total_weight;
        out["heuristic"] = s.heuristic;
        out["optimality_gap"] = s.optimality_gap;
    }
    return out;
}

std::vector<MarkedDay> assign_days(const std::string& gps_path, const PNSpace& pn) {
    ParseReport report;
    const auto days = parse_gps_file(gps_path, &report);
    if (days.empty()) throw ValidationError("no usable days in " + gps_path);
    std::vector<MarkedDay> marked;
    marked.reserve(days.size());
    for (const auto& d : days) marked.push_back(assign(d, pn));
    return marked;
}

} // namespace

PYBIND11_MODULE(pnact, mod) {
    mod.doc() = "Polygon-network activity spaces: time-use estimation, level spaces, "
                "day clustering, and the map-based mobility simulator.";

    py::register_exception<ValidationError>(mod, "ValidationError");
    py::register_exception<InfeasibleError>(mod, "InfeasibleError");

    py::class_<PNSpace>(mod, "PNSpace")
        .def(py::init([](const std::string& path) {
                 return std::make_unique<PNSpace>(load_entities(path));
             }),
             py::arg("path"), "Load a polygon-network space from GeoJSON or CSV.")
        .def("__len__", &PNSpace::size)
        .def("ids",
             [](const PNSpace& pn) {
                 std::vector<std::string> out;
                 out.reserve(pn.size());
                 for (const auto& e : pn.entities()) out.push_back(e.id);
                 return out;
             })
        .def("kind",
             [](const PNSpace& pn, const std::string& id) {
                 const auto idx = pn.find(id);
                 if (!idx) throw ValidationError("unknown entity id: " + id);
                 return std::string(kind_name(pn.entity(*idx).kind));
             },
             py::arg("id"))
        .def("nearest",
             [](const PNSpace& pn, double x, double y) {
                 const auto hit = pn.nearest({x, y});
                 return py::make_tuple(pn.entity(hit.index).id, hit.distance);
             },
             py::arg("x"), py::arg("y"), "Nearest entity id and its distance.")
        .def("margin",
             [](const PNSpace& pn, double x, double y) { return pn.voronoi_margin({x, y}); },
             py::arg("x"), py::arg("y"),
             "Half the gap between the two nearest distances: a certified lower "
             "bound on the distance to the assignment boundary.")
        .def("misclassification_bound",
             [](const PNSpace& pn, double x, double y, double sigma) {
                 return misclassification_bound(pn.voronoi_margin({x, y}), sigma);
             },
             py::arg("x"), py::arg("y"), py::arg("sigma"));

    mod.def("misclassification_bound", &misclassification_bound, py::arg("margin"),
            py::arg("sigma"),
            "min(1, exp(-margin^2 / (2 sigma^2))) for isotropic Gaussian noise.");

    mod.def("compute_marks", &compute_marks, py::arg("t"),
            "Half-gap dwell weights for sorted timestamps in [0, 1]; sums to 1.");

    mod.def(
        "estimate",
        [](const std::string& gps_path, const PNSpace& pn, const std::string& mode,
           double threshold) {
            const auto marked = assign_days(gps_path, pn);
            const auto table = estimate(marked, pn, estimator_mode_from_string(mode), threshold);
            return from_props(table.proportions());
        },
        py::arg("gps_path"), py::arg("space"), py::arg("mode") = "weighted",
        py::arg("threshold") = 0.1,
        "Time-use proportions over all entities from a GPS CSV. mode is one of "
        "naive | weighted | adjusted.");

    mod.def(
        "estimate_by_class",
        [](const std::string& gps_path, const PNSpace& pn, const std::string& mode,
           double threshold) {
            const auto marked = assign_days(gps_path, pn);
            const auto table = estimate(marked, pn, estimator_mode_from_string(mode), threshold);
            const auto classes = normalize_by_class(table);
            py::dict out;
            out["all"] = from_props(table.proportions());
            out["polygon"] = from_props(classes.polygon.prop);
            out["road"] = from_props(classes.road.prop);
            out["T_A"] = table.T_A();
            out["T_L"] = table.T_L();
            return out;
        },
        py::arg("gps_path"), py::arg("space"), py::arg("mode") = "weighted",
        py::arg("threshold") = 0.1,
        "Estimate plus per-class renormalized tables and class totals.");

    mod.def(
        "level_space",
        [](const py::dict& table, double gamma, const std::string& cls) {
            return space_to_dict(level_space(to_props(table), gamma, cls));
        },
        py::arg("table"), py::arg("gamma"), py::arg("cls") = "all",
        "Smallest entity set whose proportions sum to at least gamma.");

    mod.def(
        "weighted_level_space",
        [](const py::dict& table, const py::dict& weights, double gamma) {
            return space_to_dict(weighted_level_space(to_props(table), to_props(weights), gamma));
        },
        py::arg("table"), py::arg("weights"), py::arg("gamma"),
        "Minimum-total-weight entity set reaching mass gamma (exact up to 30 "
        "entities, flagged greedy above).");

    mod.def(
        "composed_space",
        [](const py::dict& polygon_table, const py::dict& road_table, double gamma) {
            return space_to_dict(composed_space(to_props(polygon_table), to_props(road_table), gamma));
        },
        py::arg("polygon_table"), py::arg("road_table"), py::arg("gamma"),
        "Union of the per-class level spaces; mass is the level both classes "
        "jointly guarantee.");

    mod.def(
        "tw_edit_distance",
        [](const std::vector<std::string>& labels_a, const std::vector<double>& dwell_a,
           const std::vector<std::string>& labels_b, const std::vector<double>& dwell_b,
           bool dwell_match_cost) {
            DayPattern a, b;
            a.labels = labels_a;
            a.dwell = dwell_a;
            b.labels = labels_b;
            b.dwell = dwell_b;
            if (a.labels.size() != a.dwell.size() || b.labels.size() != b.dwell.size())
                throw ValidationError("labels and dwell vectors must have equal length");
            return tw_edit_distance(a, b, dwell_match_cost);
        },
        py::arg("labels_a"), py::arg("dwell_a"), py::arg("labels_b"), py::arg("dwell_b"),
        py::arg("dwell_match_cost") = false,
        "Dwell-weighted edit distance between two compressed action vectors.");

    mod.def(
        "cluster_days",
        [](const std::string& gps_path, const PNSpace& pn, double tau, std::size_t k,
           int threads) {
            const auto marked = assign_days(gps_path, pn);
            std::vector<DayPattern> patterns;
            patterns.reserve(marked.size());
            for (const auto& m : marked)
                patterns.push_back(remove_jitter_loops(compress(m, pn), tau));
            const auto matrix = distance_matrix(patterns, threads);
            const auto labels = cut_k(single_linkage(matrix), k);
            py::list out;
            for (std::size_t i = 0; i < labels.size(); ++i)
                out.append(py::make_tuple(patterns[i].day, labels[i]));
            return out;
        },
        py::arg("gps_path"), py::arg("space"), py::arg("tau") = 0.0, py::arg("k") = 2,
        py::arg("threads") = 1,
        "Single-linkage clustering of days by dwell-weighted edit distance; "
        "returns (day, cluster label) pairs.");

    mod.def(
        "simulate",
        [](const std::string& scenario_path, const std::string& out_dir, int n, int m,
           double sigma, const std::string& spacing, long long seed, int replicate,
           int threads) {
            const auto sc = load_scenario(scenario_path);
            const int use_n = n > 0 ? n : sc.defaults.n;
            const int use_m = m > 0 ? m : sc.defaults.m;
            const double use_sigma = sigma >= 0.0 ? sigma : sc.defaults.sigma;
            const std::string use_spacing = spacing.empty() ? sc.defaults.spacing : spacing;
            const std::uint64_t use_seed =
                seed >= 0 ? static_cast<std::uint64_t>(seed) : sc.defaults.seed;
            const auto study = simulate_study(sc, use_n, use_m, use_sigma, use_spacing, use_seed,
                                              replicate, threads);
            const std::string gps = out_dir + "/gps.csv";
            const std::string truth = out_dir + "/truth.csv";
            const std::string days = out_dir + "/days.csv";
            const std::string diag = out_dir + "/diagnostics.csv";
            write_gps_csv(study_gps(study), gps);
            write_truth_csv(study, sc, truth);
            write_days_csv(study, days);
            write_diagnostics_csv(study, diag);
            py::dict out;
            out["gps"] = gps;
            out["truth"] = truth;
            out["days"] = days;
            out["diagnostics"] = diag;
            out["n"] = use_n;
            out["m"] = use_m;
            out["sigma"] = use_sigma;
            out["spacing"] = use_spacing;
            out["seed"] = use_seed;
            return out;
        },
        py::arg("scenario_path"), py::arg("out_dir"), py::arg("n") = -1, py::arg("m") = -1,
        py::arg("sigma") = -1.0, py::arg("spacing") = std::string(), py::arg("seed") = -1,
        py::arg("replicate") = 0, py::arg("threads") = 1,
        "Run the map-based mobility simulator and write gps/truth/days/diagnostics "
        "CSVs into out_dir. Unset arguments fall back to the scenario defaults.");

    mod.def(
        "analytic_truth",
        [](const std::string& scenario_path, int n) {
            return from_props(analytic_truth(load_scenario(scenario_path), n));
        },
        py::arg("scenario_path"), py::arg("n"),
        "Expected time-use proportions implied by the scenario over an n-day study.");

    mod.def(
        "rmise",
        [](const std::vector<double>& replicate_sq_sums) {
            const auto stat = rmise_stat(replicate_sq_sums);
            return py::make_tuple(stat.value, stat.se);
        },
        py::arg("replicate_sq_sums"),
        "(value, standard error) of the root mean integrated squared error from "
        "per-replicate squared-error sums.");

    mod.attr("__version__") = "0.1.0";
}
