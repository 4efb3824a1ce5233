#include "pnact/activity_space.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <set>

#include "json.hpp"
#include "pnact/errors.hpp"

namespace pnact {

namespace {

struct Item {
    std::string id;
    double prop;
    double weight;
};

void check_gamma(double gamma) {
    if (!(gamma > 0.0) || gamma > 1.0)
        throw ValidationError("gamma must lie in (0, 1]");
}

bool id_vector_less(const std::vector<std::string>& a, const std::vector<std::string>& b) {
    const std::size_t n = std::min(a.size(), b.size());
    for (std::size_t i = 0; i < n; ++i) {
        if (natural_less(a[i], b[i])) return true;
        if (natural_less(b[i], a[i])) return false;
    }
    return a.size() < b.size();
}

} // namespace

ActivitySpace level_space(const Proportions& table, double gamma, const std::string& cls) {
    check_gamma(gamma);
    double total = 0.0;
    for (const auto& [id, p] : table) {
        if (p < 0.0) throw ValidationError("level_space: negative proportion for '" + id + "'");
        total += p;
    }
    if (std::fabs(total - 1.0) > 1e-6)
        throw ValidationError("level_space: proportions must sum to 1");

    std::vector<Item> items;
    for (const auto& [id, p] : table)
        if (p > 0.0) items.push_back({id, p, 1.0});
    std::sort(items.begin(), items.end(), [](const Item& a, const Item& b) {
        if (a.prop != b.prop) return a.prop > b.prop;
        return natural_less(a.id, b.id);
    });

    ActivitySpace as;
    as.gamma = gamma;
    as.cls = cls;
    double cum = 0.0;
    const double target = std::min(gamma, total) - 1e-12;
    for (const auto& it : items) {
        as.members.push_back(it.id);
        cum += it.prop;
        if (cum >= target) break;
    }
    as.mass = cum;
    std::sort(as.members.begin(), as.members.end(), natural_less);
    return as;
}

ActivitySpace composed_space(const Proportions& polygon_table, const Proportions& road_table,
                             double gamma) {
    check_gamma(gamma);
    ActivitySpace out;
    out.gamma = gamma;
    out.cls = "composed";
    double mass = std::numeric_limits<double>::infinity();
    std::set<std::string, NaturalLess> members;
    if (!polygon_table.empty()) {
        const ActivitySpace a = level_space(polygon_table, gamma, "polygon");
        members.insert(a.members.begin(), a.members.end());
        mass = std::min(mass, a.mass);
    }
    if (!road_table.empty()) {
        const ActivitySpace l = level_space(road_table, gamma, "road");
        members.insert(l.members.begin(), l.members.end());
        mass = std::min(mass, l.mass);
    }
    out.members.assign(members.begin(), members.end());
    out.mass = std::isfinite(mass) ? mass : 0.0;
    return out;
}

namespace {

// Fractional completion bound: cheapest additional weight that can buy
// `needed` more mass using items[from..), which are sorted by density.
double fractional_bound(const std::vector<Item>& items, std::size_t from, double needed) {
    if (needed <= 0.0) return 0.0;
    double w = 0.0;
    for (std::size_t i = from; i < items.size() && needed > 0.0; ++i) {
        if (items[i].prop <= 0.0) continue;
        if (items[i].prop >= needed) {
            w += items[i].weight * needed / items[i].prop;
            return w;
        }
        w += items[i].weight;
        needed -= items[i].prop;
    }
    return needed > 0.0 ? std::numeric_limits<double>::infinity() : w;
}

struct Candidate {
    double weight = std::numeric_limits<double>::infinity();
    double mass = 0.0;
    std::vector<std::string> ids;

    bool beats(const Candidate& o) const {
        if (weight != o.weight) return weight < o.weight;
        if (mass != o.mass) return mass > o.mass;
        return id_vector_less(ids, o.ids);
    }
};

} // namespace

ActivitySpace weighted_level_space(const Proportions& table,
                                   const std::map<std::string, double, NaturalLess>& weights,
                                   double gamma) {
    check_gamma(gamma);
    std::vector<Item> items;
    double total = 0.0;
    for (const auto& [id, p] : table) {
        if (p < 0.0)
            throw ValidationError("weighted_level_space: negative proportion for '" + id + "'");
        total += p;
        if (p <= 0.0) continue; // zero-mass entities never help
        double w = 1.0;
        if (const auto it = weights.find(id); it != weights.end()) w = it->second;
        if (w < 0.0) throw ValidationError("weighted_level_space: negative weight for '" + id + "'");
        items.push_back({id, p, w});
    }
    if (total < gamma - 1e-12)
        throw InfeasibleError("weighted_level_space: total mass below gamma");

    // density order drives both the greedy incumbent and the LP-style bound
    std::sort(items.begin(), items.end(), [](const Item& a, const Item& b) {
        const bool fa = a.weight == 0.0, fb = b.weight == 0.0;
        if (fa != fb) return fa;
        const double da = fa ? a.prop : a.prop / a.weight;
        const double db = fb ? b.prop : b.prop / b.weight;
        if (da != db) return da > db;
        if (a.prop != b.prop) return a.prop > b.prop;
        return natural_less(a.id, b.id);
    });

    const std::size_t n = items.size();
    ActivitySpace as;
    as.gamma = gamma;
    as.cls = "all";

    // keep (weight, mass) reproducible for a given member set regardless of
    // the order the search visited it in: re-sum in id order
    const auto canonical = [&](std::vector<std::string> ids) {
        std::sort(ids.begin(), ids.end(), natural_less);
        Candidate c;
        c.ids = std::move(ids);
        c.weight = 0.0;
        c.mass = 0.0;
        for (const auto& id : c.ids) {
            const auto pit = table.find(id);
            c.mass += pit->second;
            double w = 1.0;
            if (const auto wit = weights.find(id); wit != weights.end()) w = wit->second;
            c.weight += w;
        }
        return c;
    };

    if (n > 30) {
        // greedy by density, flagged, with the fractional bound as the gap reference
        std::vector<std::string> ids;
        double mass = 0.0;
        for (std::size_t i = 0; i < n && mass < gamma - 1e-12; ++i) {
            ids.push_back(items[i].id);
            mass += items[i].prop;
        }
        const Candidate c = canonical(std::move(ids));
        as.members = c.ids;
        as.mass = c.mass;
        as.total_weight = c.weight;
        as.heuristic = true;
        as.optimality_gap = c.weight - fractional_bound(items, 0, gamma);
        return as;
    }

    std::vector<double> suffix_mass(n + 1, 0.0);
    for (std::size_t i = n; i-- > 0;) suffix_mass[i] = suffix_mass[i + 1] + items[i].prop;

    // zero-weight items sit at the front of the density order; past them,
    // any extension strictly increases weight
    std::size_t free_prefix = 0;
    while (free_prefix < n && items[free_prefix].weight == 0.0) ++free_prefix;

    Candidate best;
    std::vector<std::string> chosen;

    // Include-first DFS. Ties are never pruned (strict '>' with slack) so
    // equal-weight candidates still compete on mass and id order. Runs of
    // items with identical (prop, weight) are only ever included as a
    // prefix: excluding one member excludes the rest of the run. Within a
    // run the sort put the smallest ids first, so the prefix is also the
    // id-order-minimal choice, and symmetric instances stay polynomial.
    const std::function<void(std::size_t, double, double)> dfs = [&](std::size_t idx, double w,
                                                                     double mass) {
        if (mass >= gamma - 1e-12) {
            Candidate c = canonical(chosen);
            if (c.beats(best)) best = std::move(c);
            if (idx >= free_prefix) return; // further items only add weight
        }
        if (idx == n) return;
        if (mass + suffix_mass[idx] < gamma - 1e-12) return;
        const double lb = w + fractional_bound(items, idx, gamma - mass);
        if (lb > best.weight * (1.0 + 1e-12) + 1e-15) return;

        chosen.push_back(items[idx].id);
        dfs(idx + 1, w + items[idx].weight, mass + items[idx].prop);
        chosen.pop_back();
        std::size_t skip = idx + 1;
        while (skip < n && items[skip].prop == items[idx].prop &&
               items[skip].weight == items[idx].weight)
            ++skip;
        dfs(skip, w, mass);
    };
    dfs(0, 0.0, 0.0);

    as.members = best.ids;
    as.mass = best.mass;
    as.total_weight = best.weight;
    return as;
}

std::string activity_spaces_to_json(const std::vector<ActivitySpace>& spaces) {
    nlohmann::ordered_json arr = nlohmann::ordered_json::array();
    for (const auto& s : spaces) {
        nlohmann::ordered_json j{{"gamma", s.gamma},
                                 {"class", s.cls},
                                 {"members", s.members},
                                 {"mass", s.mass}};
        if (s.heuristic) {
            j["heuristic"] = true;
            j["optimality_gap"] = s.optimality_gap;
        }
        if (s.total_weight > 0.0) j["total_weight"] = s.total_weight;
        arr.push_back(std::move(j));
    }
    return arr.dump(2);
}

} // namespace pnact
