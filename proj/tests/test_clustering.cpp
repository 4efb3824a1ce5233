#include <algorithm>
#include <cmath>
#include <random>
#include <string>
#include <vector>

#include "doctest.h"
#include "pnact/clustering.hpp"
#include "pnact/errors.hpp"

using namespace pnact;

namespace {

Entity square(const std::string& id, double cx, double cy, double half) {
    Entity e;
    e.id = id;
    e.kind = Kind::polygon;
    e.rings = {{{cx - half, cy - half},
                {cx + half, cy - half},
                {cx + half, cy + half},
                {cx - half, cy + half}}};
    return e;
}

DayPattern pat(std::vector<std::string> labels, std::vector<double> dwell, int day = 1) {
    DayPattern p;
    p.day = day;
    p.labels = std::move(labels);
    p.dwell = std::move(dwell);
    return p;
}

// Independent oracle: minimum cost over every monotone alignment between the
// two sequences. Matched equal labels are free (or |z - z'| in the variant),
// matched unequal labels cost both dwells, unmatched items cost their dwell.
double alignment_oracle(const DayPattern& a, const DayPattern& b, bool dwell_match_cost) {
    // Enumerate alignments as monotone partial matchings via recursion over
    // index pairs; sequences here are tiny (<= 4).
    struct Rec {
        const DayPattern& a;
        const DayPattern& b;
        bool variant;
        double best = std::numeric_limits<double>::infinity();
        void go(std::size_t i, std::size_t j, double cost) {
            if (cost >= best) return;
            if (i == a.labels.size() || j == b.labels.size()) {
                for (std::size_t x = i; x < a.labels.size(); ++x) cost += a.dwell[x];
                for (std::size_t y = j; y < b.labels.size(); ++y) cost += b.dwell[y];
                best = std::min(best, cost);
                return;
            }
            // a[i] unmatched (deleted)
            go(i + 1, j, cost + a.dwell[i]);
            // b[j] unmatched (inserted)
            go(i, j + 1, cost + b.dwell[j]);
            // a[i] aligned with b[j]
            double pair_cost;
            if (a.labels[i] == b.labels[j])
                pair_cost = variant ? std::abs(a.dwell[i] - b.dwell[j]) : 0.0;
            else
                pair_cost = a.dwell[i] + b.dwell[j];
            go(i + 1, j + 1, cost + pair_cost);
        }
    } rec{a, b, dwell_match_cost};
    rec.go(0, 0, 0.0);
    return rec.best;
}

std::vector<double> random_dwell(std::mt19937& gen, std::size_t n) {
    std::uniform_real_distribution<double> u(0.05, 1.0);
    std::vector<double> d(n);
    double s = 0.0;
    for (auto& v : d) {
        v = u(gen);
        s += v;
    }
    for (auto& v : d) v /= s;
    return d;
}

} // namespace

TEST_CASE("compress merges adjacent equal assignments") {
    PNSpace pn({square("a1", 0, 0, 1), square("a2", 6, 0, 1)});
    MarkedDay md;
    md.day = 3;
    md.t = {0.1, 0.3, 0.5, 0.7, 0.9};
    md.pts = {{0, 0}, {0.2, 0}, {6, 0}, {6.2, 0}, {0, 0.5}};
    md.W = {0.2, 0.2, 0.2, 0.2, 0.2};
    md.entity = {0, 0, 1, 1, 0};

    const DayPattern p = compress(md, pn);
    CHECK(p.day == 3);
    CHECK(p.labels == std::vector<std::string>{"a1", "a2", "a1"});
    REQUIRE(p.dwell.size() == 3);
    CHECK(p.dwell[0] == doctest::Approx(0.4));
    CHECK(p.dwell[1] == doctest::Approx(0.4));
    CHECK(p.dwell[2] == doctest::Approx(0.2));
}

TEST_CASE("jitter loops collapse below tau, preserving mass") {
    // h, w, h with a tiny w inside collapses into a single h.
    const auto once = remove_jitter_loops(pat({"h", "w", "h"}, {0.45, 0.05, 0.5}), 0.1);
    CHECK(once.labels == std::vector<std::string>{"h"});
    REQUIRE(once.dwell.size() == 1);
    CHECK(once.dwell[0] == doctest::Approx(1.0));

    // Above tau nothing happens.
    const auto keep = remove_jitter_loops(pat({"h", "w", "h"}, {0.4, 0.2, 0.4}), 0.1);
    CHECK(keep.labels.size() == 3);

    // Collapses cascade: h w h w h with tiny interiors reduces fully.
    const auto chain =
        remove_jitter_loops(pat({"h", "w", "h", "w", "h"}, {0.3, 0.04, 0.3, 0.04, 0.32}), 0.1);
    CHECK(chain.labels == std::vector<std::string>{"h"});
    CHECK(chain.dwell[0] == doctest::Approx(1.0));

    // Multi-element interiors count their total mass.
    const auto multi =
        remove_jitter_loops(pat({"h", "w", "p", "h"}, {0.45, 0.04, 0.04, 0.47}), 0.1);
    CHECK(multi.labels == std::vector<std::string>{"h"});

    const auto too_big =
        remove_jitter_loops(pat({"h", "w", "p", "h"}, {0.4, 0.08, 0.08, 0.44}), 0.1);
    CHECK(too_big.labels.size() == 4); // interior sums to 0.16 > tau

    // tau = 0 never collapses.
    const auto zero = remove_jitter_loops(pat({"h", "w", "h"}, {0.45, 0.05, 0.5}), 0.0);
    CHECK(zero.labels.size() == 3);
}

TEST_CASE("edit distance: hand-checked values") {
    // Dropping one element costs its dwell.
    CHECK(tw_edit_distance(pat({"h", "w"}, {0.6, 0.4}), pat({"h"}, {1.0})) ==
          doctest::Approx(0.4));
    // Identical patterns are at distance zero.
    CHECK(tw_edit_distance(pat({"h", "w"}, {0.6, 0.4}), pat({"h", "w"}, {0.6, 0.4})) == 0.0);
    // A substitution costs both dwells.
    CHECK(tw_edit_distance(pat({"h"}, {1.0}), pat({"w"}, {1.0})) == doctest::Approx(2.0));
    // Matching ignores dwell differences under the reference rule...
    CHECK(tw_edit_distance(pat({"h"}, {1.0}), pat({"h"}, {0.2})) == 0.0);
    // ...but the variant charges |z - z'|.
    CHECK(tw_edit_distance(pat({"h"}, {1.0}), pat({"h"}, {0.2}), true) == doctest::Approx(0.8));

    // Empty against non-empty costs the total mass.
    CHECK(tw_edit_distance(pat({}, {}), pat({"h", "w"}, {0.7, 0.3})) == doctest::Approx(1.0));
    CHECK(tw_edit_distance(pat({}, {}), pat({}, {})) == 0.0);
}

TEST_CASE("edit distance matches the alignment oracle on every short pair") {
    const std::vector<std::string> alphabet{"A", "B", "C"};
    // Every label sequence of length 0..3 over a 3-letter alphabet.
    std::vector<std::vector<std::string>> seqs;
    seqs.push_back({});
    for (const auto& x : alphabet) {
        seqs.push_back({x});
        for (const auto& y : alphabet) {
            seqs.push_back({x, y});
            for (const auto& z : alphabet) seqs.push_back({x, y, z});
        }
    }

    std::mt19937 gen(6174);
    int compared = 0;
    for (const auto& sa : seqs) {
        for (const auto& sb : seqs) {
            DayPattern a = pat(sa, random_dwell(gen, sa.size()));
            DayPattern b = pat(sb, random_dwell(gen, sb.size()));
            for (const bool variant : {false, true}) {
                const double got = tw_edit_distance(a, b, variant);
                const double want = alignment_oracle(a, b, variant);
                CHECK(got == doctest::Approx(want).epsilon(1e-12));
            }
            ++compared;
        }
    }
    CHECK(compared == 40 * 40);
}

TEST_CASE("edit distance is symmetric on random pairs") {
    std::mt19937 gen(42);
    std::uniform_int_distribution<int> len(0, 6);
    std::uniform_int_distribution<int> lab(0, 4);
    for (int trial = 0; trial < 500; ++trial) {
        const std::size_t na = static_cast<std::size_t>(len(gen));
        const std::size_t nb = static_cast<std::size_t>(len(gen));
        std::vector<std::string> la, lb;
        for (std::size_t i = 0; i < na; ++i) la.push_back("e" + std::to_string(lab(gen)));
        for (std::size_t i = 0; i < nb; ++i) lb.push_back("e" + std::to_string(lab(gen)));
        const DayPattern a = pat(la, random_dwell(gen, na));
        const DayPattern b = pat(lb, random_dwell(gen, nb));
        CHECK(tw_edit_distance(a, b) == doctest::Approx(tw_edit_distance(b, a)).epsilon(1e-12));
        CHECK(tw_edit_distance(a, b, true) ==
              doctest::Approx(tw_edit_distance(b, a, true)).epsilon(1e-12));
        CHECK(tw_edit_distance(a, a) == 0.0);
        CHECK(tw_edit_distance(a, b) >= 0.0);
    }
}

TEST_CASE("edit distance satisfies the triangle inequality on shared-dwell days") {
    // Each label carries the same dwell wherever it appears; with a universal
    // per-label weight the indel/substitution costs form a metric, so the
    // distance itself must be one.
    std::mt19937 gen(77);
    std::uniform_int_distribution<int> len(1, 5);
    std::uniform_int_distribution<int> lab(0, 3);
    const double base[4] = {0.4, 0.3, 0.2, 0.1};
    const auto make = [&]() {
        const std::size_t n = static_cast<std::size_t>(len(gen));
        std::vector<std::string> ls;
        std::vector<double> ds;
        for (std::size_t i = 0; i < n; ++i) {
            const int l = lab(gen);
            if (!ls.empty() && ls.back() == "e" + std::to_string(l)) continue;
            ls.push_back("e" + std::to_string(l));
            ds.push_back(base[l]);
        }
        return pat(ls, ds);
    };
    for (int trial = 0; trial < 3000; ++trial) {
        const DayPattern a = make(), b = make(), c = make();
        const double ab = tw_edit_distance(a, b);
        const double bc = tw_edit_distance(b, c);
        const double ac = tw_edit_distance(a, c);
        CHECK(ac <= ab + bc + 1e-9);
    }
}

TEST_CASE("distance matrix is symmetric with a zero diagonal, any thread count") {
    std::mt19937 gen(99);
    std::uniform_int_distribution<int> len(1, 5);
    std::uniform_int_distribution<int> lab(0, 3);
    std::vector<DayPattern> patterns;
    for (int d = 0; d < 12; ++d) {
        const std::size_t n = static_cast<std::size_t>(len(gen));
        std::vector<std::string> ls;
        for (std::size_t i = 0; i < n; ++i) ls.push_back("e" + std::to_string(lab(gen)));
        patterns.push_back(pat(ls, random_dwell(gen, n), d + 1));
    }
    const auto m1 = distance_matrix(patterns, 1);
    const auto m3 = distance_matrix(patterns, 3);
    REQUIRE(m1.size() == patterns.size());
    for (std::size_t i = 0; i < m1.size(); ++i) {
        REQUIRE(m1[i].size() == patterns.size());
        CHECK(m1[i][i] == 0.0);
        for (std::size_t j = 0; j < m1.size(); ++j) {
            CHECK(m1[i][j] == doctest::Approx(m1[j][i]).epsilon(1e-15));
            CHECK(m1[i][j] == m3[i][j]); // bitwise equal across thread counts
            CHECK(m1[i][j] ==
                  doctest::Approx(tw_edit_distance(patterns[i], patterns[j])).epsilon(1e-15));
        }
    }
}

TEST_CASE("single linkage on a hand dendrogram") {
    // d(0,1) = 1, d(0,2) = 5, d(1,2) = 4.
    const std::vector<std::vector<double>> m{{0, 1, 5}, {1, 0, 4}, {5, 4, 0}};
    const Linkage link = single_linkage(m);
    CHECK(link.n == 3);
    REQUIRE(link.merges.size() == 2);
    CHECK(link.merges[0].left == 0);
    CHECK(link.merges[0].right == 1);
    CHECK(link.merges[0].height == doctest::Approx(1.0));
    CHECK(link.merges[1].height == doctest::Approx(4.0)); // single linkage: min(5, 4)

    const auto two = cut_k(link, 2);
    CHECK(two == std::vector<int>{0, 0, 1});
    const auto one = cut_k(link, 1);
    CHECK(one == std::vector<int>{0, 0, 0});
    const auto three = cut_k(link, 3);
    CHECK(three == std::vector<int>{0, 1, 2});

    CHECK(cut_height(link, 2.0) == std::vector<int>{0, 0, 1});
    CHECK(cut_height(link, 0.5) == std::vector<int>{0, 1, 2});
    CHECK(cut_height(link, 10.0) == std::vector<int>{0, 0, 0});

    CHECK_THROWS_AS(cut_k(link, 0), ValidationError);
    CHECK_THROWS_AS(cut_k(link, 4), ValidationError);
}

TEST_CASE("single linkage heights are nondecreasing and chain correctly") {
    // Points on a line at 0, 1, 2, 10: chain 0-1-2 first, then 10 joins at 8.
    const auto d = [](double a, double b) { return std::abs(a - b); };
    const std::vector<double> xs{0, 1, 2, 10};
    std::vector<std::vector<double>> m(4, std::vector<double>(4, 0.0));
    for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 4; ++j) m[i][j] = d(xs[i], xs[j]);
    const Linkage link = single_linkage(m);
    REQUIRE(link.merges.size() == 3);
    for (std::size_t i = 1; i < link.merges.size(); ++i)
        CHECK(link.merges[i].height >= link.merges[i - 1].height);
    CHECK(link.merges.back().height == doctest::Approx(8.0));
    CHECK(cut_k(link, 2) == std::vector<int>{0, 0, 0, 1});
}

TEST_CASE("linkage json round trip") {
    const std::vector<std::vector<double>> m{{0, 1, 5}, {1, 0, 4}, {5, 4, 0}};
    const Linkage link = single_linkage(m);
    const std::string js = linkage_to_json(link);
    const Linkage back = linkage_from_json(js);
    CHECK(back.n == link.n);
    REQUIRE(back.merges.size() == link.merges.size());
    for (std::size_t i = 0; i < back.merges.size(); ++i) {
        CHECK(back.merges[i].left == link.merges[i].left);
        CHECK(back.merges[i].right == link.merges[i].right);
        CHECK(back.merges[i].height == doctest::Approx(link.merges[i].height));
    }
    CHECK_THROWS_AS(linkage_from_json("{\"bad\": true}"), ValidationError);
}

TEST_CASE("flag_outliers spots the day far from everyone") {
    // Five mutually-close days plus one far day.
    const std::size_t n = 6;
    std::vector<std::vector<double>> m(n, std::vector<double>(n, 0.1));
    for (std::size_t i = 0; i < n; ++i) m[i][i] = 0.0;
    for (std::size_t i = 0; i + 1 < n; ++i) {
        m[i][n - 1] = 5.0;
        m[n - 1][i] = 5.0;
    }
    const auto out = flag_outliers(m, 1.5);
    REQUIRE(out.size() == 1);
    CHECK(out[0] == n - 1);

    // A uniform matrix has no outliers.
    std::vector<std::vector<double>> flat(4, std::vector<double>(4, 1.0));
    for (std::size_t i = 0; i < 4; ++i) flat[i][i] = 0.0;
    CHECK(flag_outliers(flat, 2.0).empty());
}
