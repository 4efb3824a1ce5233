#include "pnact/clustering.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <numeric>

#include "json.hpp"
#include "pnact/errors.hpp"
#include "pnact/parallel.hpp"

namespace pnact {

DayPattern compress(const MarkedDay& day, const PNSpace& pn) {
    if (day.entity.empty()) throw ValidationError("compress: empty day");
    DayPattern out;
    out.day = day.day;
    for (std::size_t j = 0; j < day.entity.size(); ++j) {
        const std::string& id = pn.entity(day.entity[j]).id;
        if (!out.labels.empty() && out.labels.back() == id) {
            out.dwell.back() += day.W[j];
        } else {
            out.labels.push_back(id);
            out.dwell.push_back(day.W[j]);
        }
    }
    return out;
}

namespace {

void recompress(DayPattern& p) {
    std::size_t w = 0;
    for (std::size_t i = 0; i < p.labels.size(); ++i) {
        if (w > 0 && p.labels[w - 1] == p.labels[i]) {
            p.dwell[w - 1] += p.dwell[i];
        } else {
            p.labels[w] = p.labels[i];
            p.dwell[w] = p.dwell[i];
            ++w;
        }
    }
    p.labels.resize(w);
    p.dwell.resize(w);
}

} // namespace

DayPattern remove_jitter_loops(DayPattern pattern, double tau) {
    if (tau < 0.0) throw ValidationError("remove_jitter_loops: negative tau");
    bool changed = true;
    while (changed) {
        changed = false;
        for (std::size_t i = 0; i + 2 < pattern.labels.size(); ++i) {
            // nearest later recurrence of labels[i]; everything between is the
            // loop interior (nested loops resolve over later passes)
            std::size_t j = i + 1;
            double interior = 0.0;
            while (j < pattern.labels.size() && pattern.labels[j] != pattern.labels[i]) {
                interior += pattern.dwell[j];
                if (interior > tau) break;
                ++j;
            }
            if (j < pattern.labels.size() && pattern.labels[j] == pattern.labels[i] &&
                interior <= tau) {
                pattern.dwell[i] += interior + pattern.dwell[j];
                pattern.labels.erase(pattern.labels.begin() + static_cast<long>(i) + 1,
                                     pattern.labels.begin() + static_cast<long>(j) + 1);
                pattern.dwell.erase(pattern.dwell.begin() + static_cast<long>(i) + 1,
                                    pattern.dwell.begin() + static_cast<long>(j) + 1);
                changed = true;
            }
        }
        recompress(pattern);
    }
    return pattern;
}

double tw_edit_distance(const DayPattern& a, const DayPattern& b, bool dwell_match_cost) {
    const std::size_t n = a.labels.size(), m = b.labels.size();
    std::vector<double> prev(m + 1), cur(m + 1);
    prev[0] = 0.0;
    for (std::size_t j = 1; j <= m; ++j) prev[j] = prev[j - 1] + b.dwell[j - 1];
    for (std::size_t i = 1; i <= n; ++i) {
        cur[0] = prev[0] + a.dwell[i - 1];
        for (std::size_t j = 1; j <= m; ++j) {
            const double del = prev[j] + a.dwell[i - 1];
            const double ins = cur[j - 1] + b.dwell[j - 1];
            double sub;
            if (a.labels[i - 1] == b.labels[j - 1])
                sub = prev[j - 1] +
                      (dwell_match_cost ? std::fabs(a.dwell[i - 1] - b.dwell[j - 1]) : 0.0);
            else
                sub = prev[j - 1] + a.dwell[i - 1] + b.dwell[j - 1];
            cur[j] = std::min({del, ins, sub});
        }
        std::swap(prev, cur);
    }
    return prev[m];
}

std::vector<std::vector<double>> distance_matrix(const std::vector<DayPattern>& patterns,
                                                 int threads) {
    const std::size_t n = patterns.size();
    if (n < 2) throw ValidationError("distance_matrix: need at least 2 patterns");
    std::vector<std::vector<double>> d(n, std::vector<double>(n, 0.0));
    std::vector<std::pair<std::size_t, std::size_t>> pairs;
    pairs.reserve(n * (n - 1) / 2);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j) pairs.emplace_back(i, j);
    parallel_for(pairs.size(), threads, [&](std::size_t k) {
        const auto [i, j] = pairs[k];
        const double v = tw_edit_distance(patterns[i], patterns[j]);
        d[i][j] = v;
        d[j][i] = v;
    });
    return d;
}

Linkage single_linkage(const std::vector<std::vector<double>>& matrix) {
    const std::size_t n = matrix.size();
    if (n < 2) throw ValidationError("single_linkage: need at least 2 items");
    for (const auto& row : matrix)
        if (row.size() != n) throw ValidationError("single_linkage: matrix not square");

    struct Cluster {
        int id;
        std::size_t min_member;
        bool alive = true;
    };
    std::vector<Cluster> clusters;
    clusters.reserve(2 * n - 1);
    for (std::size_t i = 0; i < n; ++i)
        clusters.push_back({static_cast<int>(i), i, true});

    // single-linkage distances between active clusters, updated by min()
    std::vector<std::vector<double>> d = matrix;
    std::vector<std::size_t> active(n);
    std::iota(active.begin(), active.end(), 0);

    Linkage out;
    out.n = n;
    while (active.size() > 1) {
        double bestd = std::numeric_limits<double>::infinity();
        std::size_t ba = 0, bb = 1;
        for (std::size_t x = 0; x < active.size(); ++x) {
            for (std::size_t y = x + 1; y < active.size(); ++y) {
                const std::size_t a = active[x], b = active[y];
                const double v = d[clusters[a].min_member][clusters[b].min_member];
                // tie-break on the pair's smallest member indices
                if (v < bestd) {
                    bestd = v;
                    ba = x;
                    bb = y;
                } else if (v == bestd) {
                    const auto key = [&](std::size_t p, std::size_t q) {
                        const std::size_t mp = clusters[active[p]].min_member;
                        const std::size_t mq = clusters[active[q]].min_member;
                        return std::pair<std::size_t, std::size_t>{std::min(mp, mq),
                                                                   std::max(mp, mq)};
                    };
                    if (key(x, y) < key(ba, bb)) {
                        ba = x;
                        bb = y;
                    }
                }
            }
        }
        const std::size_t a = active[ba], b = active[bb];
        const std::size_t ra = clusters[a].min_member, rb = clusters[b].min_member;
        const std::size_t lo = std::min(ra, rb), hi = std::max(ra, rb);
        // reuse row `lo` for the merged cluster's distances
        for (const std::size_t c : active) {
            const std::size_t rc = clusters[c].min_member;
            if (rc == ra || rc == rb) continue;
            const double v = std::min(d[lo][rc], d[hi][rc]);
            d[lo][rc] = v;
            d[rc][lo] = v;
        }
        const Cluster& ca = clusters[ra == lo ? a : b];
        const Cluster& cb = clusters[ra == lo ? b : a];
        out.merges.push_back({ca.id, cb.id, bestd});
        Cluster merged{static_cast<int>(n + out.merges.size() - 1), lo, true};
        clusters[a].alive = clusters[b].alive = false;
        clusters.push_back(merged);
        // replace the two with the merged cluster
        active.erase(active.begin() + static_cast<long>(bb));
        active[ba] = clusters.size() - 1;
    }
    return out;
}

namespace {

std::vector<int> labels_from_groups(std::size_t n, const std::vector<std::vector<std::size_t>>& groups) {
    std::vector<std::vector<std::size_t>> sorted = groups;
    std::sort(sorted.begin(), sorted.end(),
              [](const auto& a, const auto& b) { return a.front() < b.front(); });
    std::vector<int> labels(n, -1);
    for (std::size_t g = 0; g < sorted.size(); ++g)
        for (const std::size_t i : sorted[g]) labels[i] = static_cast<int>(g);
    return labels;
}

std::vector<int> cut_after(const Linkage& linkage, std::size_t steps) {
    const std::size_t n = linkage.n;
    std::vector<std::vector<std::size_t>> members(2 * n - 1);
    for (std::size_t i = 0; i < n; ++i) members[i] = {i};
    std::vector<bool> alive(2 * n - 1, false);
    for (std::size_t i = 0; i < n; ++i) alive[i] = true;
    for (std::size_t s = 0; s < steps; ++s) {
        const MergeStep& ms = linkage.merges[s];
        const std::size_t id = n + s;
        members[id] = members[static_cast<std::size_t>(ms.left)];
        members[id].insert(members[id].end(),
                           members[static_cast<std::size_t>(ms.right)].begin(),
                           members[static_cast<std::size_t>(ms.right)].end());
        std::sort(members[id].begin(), members[id].end());
        alive[static_cast<std::size_t>(ms.left)] = false;
        alive[static_cast<std::size_t>(ms.right)] = false;
        alive[id] = true;
    }
    std::vector<std::vector<std::size_t>> groups;
    for (std::size_t i = 0; i < alive.size(); ++i)
        if (alive[i] && !members[i].empty()) groups.push_back(members[i]);
    return labels_from_groups(n, groups);
}

} // namespace

std::vector<int> cut_k(const Linkage& linkage, std::size_t k) {
    if (k < 1 || k > linkage.n) throw ValidationError("cut_k: k out of range");
    return cut_after(linkage, linkage.n - k);
}

std::vector<int> cut_height(const Linkage& linkage, double h) {
    std::size_t steps = 0;
    while (steps < linkage.merges.size() && linkage.merges[steps].height <= h) ++steps;
    return cut_after(linkage, steps);
}

std::vector<std::size_t> flag_outliers(const std::vector<std::vector<double>>& matrix,
                                       double alpha) {
    const std::size_t n = matrix.size();
    if (n < 3) throw ValidationError("flag_outliers: need at least 3 days");
    std::vector<double> means(n, 0.0);
    for (std::size_t i = 0; i < n; ++i) {
        double s = 0.0;
        for (std::size_t j = 0; j < n; ++j)
            if (j != i) s += matrix[i][j];
        means[i] = s / static_cast<double>(n - 1);
    }
    const double mu = std::accumulate(means.begin(), means.end(), 0.0) / static_cast<double>(n);
    double var = 0.0;
    for (const double m : means) var += (m - mu) * (m - mu);
    const double sd = std::sqrt(var / static_cast<double>(n - 1));
    std::vector<std::size_t> out;
    for (std::size_t i = 0; i < n; ++i)
        if (means[i] > mu + alpha * sd) out.push_back(i);
    return out;
}

void write_matrix_csv(const std::vector<std::vector<double>>& matrix, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw ValidationError("cannot write '" + path + "'");
    char buf[40];
    for (const auto& row : matrix) {
        for (std::size_t j = 0; j < row.size(); ++j) {
            std::snprintf(buf, sizeof buf, "%.12g", row[j]);
            out << (j ? "," : "") << buf;
        }
        out << "\n";
    }
}

std::string linkage_to_json(const Linkage& linkage) {
    nlohmann::ordered_json arr = nlohmann::ordered_json::array();
    for (const auto& m : linkage.merges)
        arr.push_back({{"left", m.left}, {"right", m.right}, {"height", m.height}});
    return nlohmann::ordered_json{{"n", linkage.n}, {"merges", arr}}.dump(2);
}

Linkage linkage_from_json(const std::string& text) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(text);
    } catch (const nlohmann::json::exception& e) {
        throw ValidationError(std::string("linkage JSON: ") + e.what());
    }
    Linkage l;
    try {
        l.n = j.at("n").get<std::size_t>();
        for (const auto& m : j.at("merges"))
            l.merges.push_back({m.at("left").get<int>(), m.at("right").get<int>(),
                                m.at("height").get<double>()});
    } catch (const nlohmann::json::exception& e) {
        throw ValidationError(std::string("linkage JSON: ") + e.what());
    }
    return l;
}

void write_labels_csv(const std::vector<int>& days, const std::vector<int>& labels,
                      const std::vector<std::size_t>& outliers, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw ValidationError("cannot write '" + path + "'");
    out << "day,cluster,outlier\n";
    for (std::size_t i = 0; i < days.size(); ++i) {
        const bool is_out = std::find(outliers.begin(), outliers.end(), i) != outliers.end();
        out << days[i] << "," << labels[i] << "," << (is_out ? 1 : 0) << "\n";
    }
}

} // namespace pnact
