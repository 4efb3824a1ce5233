#include "pnact/eval.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <set>

#include "pnact/errors.hpp"
#include "pnact/parallel.hpp"

namespace pnact {

double squared_error_sum(const TimeUseTable& estimate, const TruthTable& truth) {
    std::set<std::string, NaturalLess> ids;
    for (const auto& [id, cell] : estimate.cells) ids.insert(id);
    for (const auto& [id, v] : truth) ids.insert(id);
    double sum = 0.0;
    for (const auto& id : ids) {
        const auto e = estimate.cells.find(id);
        const auto t = truth.find(id);
        const double err =
            (e == estimate.cells.end() ? 0.0 : e->second.prop) - (t == truth.end() ? 0.0 : t->second);
        sum += err * err;
    }
    return sum;
}

RmiseStat rmise_stat(const std::vector<double>& sq_sums) {
    if (sq_sums.empty()) throw ValidationError("rmise needs at least one replicate");
    const double R = static_cast<double>(sq_sums.size());
    double mean = 0.0;
    for (double x : sq_sums) mean += x;
    mean /= R;
    RmiseStat s;
    s.value = std::sqrt(mean);
    if (sq_sums.size() > 1 && mean > 0.0) {
        double ss = 0.0;
        for (double x : sq_sums) ss += (x - mean) * (x - mean);
        const double se_mean = std::sqrt(ss / (R - 1.0) / R);
        s.se = se_mean / (2.0 * s.value); // delta method through sqrt
    }
    return s;
}

double rmise(const std::vector<TimeUseTable>& estimates, const std::vector<TruthTable>& truths) {
    if (estimates.size() != truths.size() || estimates.empty())
        throw ValidationError("rmise: estimates and truths must align");
    std::vector<double> sq(estimates.size());
    for (std::size_t i = 0; i < estimates.size(); ++i)
        sq[i] = squared_error_sum(estimates[i], truths[i]);
    return rmise_stat(sq).value;
}

TruthTable expected_truth(const Scenario& sc, const std::string& day_type) {
    double total_prob = 0.0;
    for (const auto& p : sc.patterns)
        if (p.day_type == day_type) total_prob += p.prob;
    if (total_prob <= 0.0)
        throw ValidationError("no patterns for day type '" + day_type + "'");

    TruthTable truth;
    for (const auto& p : sc.patterns) {
        if (p.day_type != day_type) continue;
        const double w = p.prob / total_prob;

        double before_final = 0.0;
        for (std::size_t i = 0; i + 1 < p.steps.size(); ++i) before_final += p.steps[i].mu;
        const double absorb = 24.0 - before_final;
        if (absorb < 0.0)
            throw ValidationError("pattern '" + p.name + "': expected durations exceed 24 h");

        for (std::size_t i = 0; i < p.steps.size(); ++i) {
            const Step& s = p.steps[i];
            const double hours = i + 1 == p.steps.size() ? absorb : s.mu;
            const double frac = hours / 24.0;
            if (s.kind == StepKind::stay) {
                truth[s.place] += w * frac;
            } else {
                double total_len = 0.0;
                std::vector<double> lens;
                for (const auto& id : s.route) {
                    lens.push_back(polyline_length(sc.find(id).line));
                    total_len += lens.back();
                }
                for (std::size_t k = 0; k < s.route.size(); ++k)
                    truth[s.route[k]] += w * frac * lens[k] / total_len;
            }
        }
    }
    return truth;
}

TruthTable analytic_truth(const Scenario& sc, int n) {
    if (n < 1) throw ValidationError("analytic_truth: need n >= 1");
    int weekdays = 0;
    for (int day = 1; day <= n; ++day)
        if (day_type_for(day) == "weekday") ++weekdays;

    const TruthTable wd = expected_truth(sc, "weekday");
    const TruthTable we = expected_truth(sc, "weekend");
    const double a = static_cast<double>(weekdays) / n;
    TruthTable truth;
    for (const auto& [id, v] : wd) truth[id] += a * v;
    for (const auto& [id, v] : we) truth[id] += (1.0 - a) * v;
    return truth;
}

namespace {

struct ReplicateErrors {
    double naive = 0.0;
    double weighted = 0.0;
    double adjusted = 0.0;
};

} // namespace

std::vector<CellResult> run_comparison(const Scenario& sc, const ExperimentGrid& grid) {
    if (grid.n_values.empty() || grid.m_values.empty())
        throw ValidationError("experiment grid is empty");
    if (grid.replicates < 1) throw ValidationError("need at least one replicate");
    if (grid.spacing != "even" && grid.spacing != "realistic")
        throw ValidationError("spacing must be even|realistic");

    const PNSpace pn(sc.entities);
    std::vector<CellResult> rows;
    for (const int n : grid.n_values) {
        const TruthTable truth = analytic_truth(sc, n);
        for (const int m : grid.m_values) {
            const std::size_t R = static_cast<std::size_t>(grid.replicates);
            std::vector<ReplicateErrors> errs(R);
            parallel_for(R, grid.threads, [&](std::size_t r) {
                const SimStudy study = simulate_study(sc, n, m, grid.sigma, grid.spacing,
                                                      grid.seed, static_cast<int>(r), 1);
                std::vector<MarkedDay> days;
                days.reserve(study.days.size());
                for (const auto& d : study.days) days.push_back(assign(d.gps, pn));

                const TimeUseTable naive = estimate(days, pn, EstimatorMode::naive);
                const TimeUseTable weighted = estimate(days, pn, EstimatorMode::weighted);
                const TimeUseTable adjusted =
                    estimate(days, pn, EstimatorMode::adjusted, grid.epsilon);
                errs[r] = {squared_error_sum(naive, truth), squared_error_sum(weighted, truth),
                           squared_error_sum(adjusted, truth)};
            });

            std::vector<double> a(R), b(R), c(R);
            for (std::size_t r = 0; r < R; ++r) {
                a[r] = errs[r].naive;
                b[r] = errs[r].weighted;
                c[r] = errs[r].adjusted;
            }
            const RmiseStat sa = rmise_stat(a), sb = rmise_stat(b), sc_ = rmise_stat(c);
            CellResult row;
            row.spacing = grid.spacing;
            row.n = n;
            row.m = m;
            row.epsilon = grid.epsilon;
            row.naive = sa.value;
            row.weighted = sb.value;
            row.adjusted = sc_.value;
            row.se_naive = sa.se;
            row.se_weighted = sb.se;
            row.se_adjusted = sc_.se;
            row.R = grid.replicates;
            rows.push_back(row);
        }
    }
    return rows;
}

void write_results_csv(const std::vector<CellResult>& rows, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw ValidationError("cannot write '" + path + "'");
    out << "spacing,n,m,epsilon,naive,weighted,adjusted,se_naive,se_weighted,se_adjusted,R\n";
    char buf[256];
    for (const auto& r : rows) {
        std::snprintf(buf, sizeof buf, "%s,%d,%d,%.12g,%.12g,%.12g,%.12g,%.12g,%.12g,%.12g,%d\n",
                      r.spacing.c_str(), r.n, r.m, r.epsilon, r.naive, r.weighted, r.adjusted,
                      r.se_naive, r.se_weighted, r.se_adjusted, r.R);
        out << buf;
    }
}

double fit_loglog_slope(const std::vector<double>& x, const std::vector<double>& y) {
    if (x.size() != y.size() || x.size() < 2)
        throw ValidationError("slope fit needs at least two aligned points");
    std::vector<double> lx, ly;
    for (std::size_t i = 0; i < x.size(); ++i) {
        if (x[i] <= 0.0 || y[i] <= 0.0) throw ValidationError("slope fit needs positive values");
        lx.push_back(std::log(x[i]));
        ly.push_back(std::log(y[i]));
    }
    double mx = 0.0, my = 0.0;
    for (std::size_t i = 0; i < lx.size(); ++i) {
        mx += lx[i];
        my += ly[i];
    }
    mx /= static_cast<double>(lx.size());
    my /= static_cast<double>(ly.size());
    double num = 0.0, den = 0.0;
    for (std::size_t i = 0; i < lx.size(); ++i) {
        num += (lx[i] - mx) * (ly[i] - my);
        den += (lx[i] - mx) * (lx[i] - mx);
    }
    if (den == 0.0) throw ValidationError("slope fit needs at least two distinct x");
    return num / den;
}

double convergence_check(const Scenario& sc, const std::vector<int>& n_values, int m,
                         double sigma, int replicates, std::uint64_t seed, int threads) {
    if (n_values.size() < 3) throw ValidationError("convergence check needs >= 3 n values");
    ExperimentGrid grid;
    grid.n_values = n_values;
    grid.m_values = {m};
    grid.sigma = sigma;
    grid.spacing = "even";
    grid.replicates = replicates;
    grid.seed = seed;
    grid.threads = threads;
    const std::vector<CellResult> rows = run_comparison(sc, grid);
    std::vector<double> xs, ys;
    for (const auto& r : rows) {
        xs.push_back(static_cast<double>(r.n));
        ys.push_back(r.weighted);
    }
    return fit_loglog_slope(xs, ys);
}

} // namespace pnact
