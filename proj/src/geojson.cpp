#include "pnact/geojson.hpp"

#include <fstream>
#include <sstream>

#include "json.hpp"
#include "pnact/errors.hpp"

namespace pnact {

using nlohmann::json;

namespace {

std::vector<Point2D> parse_coords(const json& arr, const std::string& id) {
    std::vector<Point2D> pts;
    for (const auto& c : arr) {
        if (!c.is_array() || c.size() < 2)
            throw ValidationError("feature '" + id + "': bad coordinate");
        pts.push_back({c[0].get<double>(), c[1].get<double>()});
    }
    return pts;
}

std::string id_of(const json& props) {
    if (!props.contains("id")) throw ValidationError("feature missing 'id' property");
    const json& v = props["id"];
    if (v.is_string()) return v.get<std::string>();
    if (v.is_number_integer()) return std::to_string(v.get<long long>());
    if (v.is_number()) {
        std::ostringstream os;
        os << v.get<double>();
        return os.str();
    }
    throw ValidationError("feature 'id' must be a string or number");
}

} // namespace

std::vector<Entity> entities_from_geojson(const std::string& text) {
    json root;
    try {
        root = json::parse(text);
    } catch (const json::exception& e) {
        throw ValidationError(std::string("GeoJSON parse error: ") + e.what());
    }
    if (!root.is_object() || root.value("type", "") != "FeatureCollection" ||
        !root.contains("features"))
        throw ValidationError("expected a GeoJSON FeatureCollection");

    std::vector<Entity> out;
    for (const auto& f : root["features"]) {
        const json props = f.value("properties", json::object());
        Entity e;
        e.id = id_of(props);
        if (props.contains("weight")) e.weight = props["weight"].get<double>();
        const json& g = f.at("geometry");
        const std::string type = g.value("type", "");
        if (type == "Polygon") {
            e.kind = Kind::polygon;
            for (const auto& ring : g.at("coordinates")) {
                auto pts = parse_coords(ring, e.id);
                // GeoJSON rings repeat the first vertex at the end
                if (pts.size() >= 2 && pts.front().x == pts.back().x &&
                    pts.front().y == pts.back().y)
                    pts.pop_back();
                e.rings.push_back(std::move(pts));
            }
        } else if (type == "LineString") {
            e.kind = Kind::segment;
            e.line = parse_coords(g.at("coordinates"), e.id);
        } else {
            throw ValidationError("feature '" + e.id + "': unsupported geometry type '" + type +
                                  "'");
        }
        out.push_back(std::move(e));
    }
    return out;
}

std::vector<Entity> load_entities_geojson(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ValidationError("cannot open '" + path + "'");
    std::stringstream ss;
    ss << in.rdbuf();
    return entities_from_geojson(ss.str());
}

std::string entities_to_geojson(const std::vector<Entity>& entities) {
    json features = json::array();
    for (const auto& e : entities) {
        json g;
        if (e.kind == Kind::polygon) {
            g["type"] = "Polygon";
            json rings = json::array();
            for (const auto& r : e.rings) {
                json ring = json::array();
                for (const auto& p : r) ring.push_back({p.x, p.y});
                ring.push_back({r.front().x, r.front().y}); // close
                rings.push_back(std::move(ring));
            }
            g["coordinates"] = std::move(rings);
        } else {
            g["type"] = "LineString";
            json coords = json::array();
            for (const auto& p : e.line) coords.push_back({p.x, p.y});
            g["coordinates"] = std::move(coords);
        }
        json props{{"id", e.id}};
        if (e.weight != 1.0) props["weight"] = e.weight;
        features.push_back(json{{"type", "Feature"},
                                {"properties", std::move(props)},
                                {"geometry", std::move(g)}});
    }
    return json{{"type", "FeatureCollection"}, {"features", std::move(features)}}.dump(2);
}

void save_entities_geojson(const std::vector<Entity>& entities, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw ValidationError("cannot write '" + path + "'");
    out << entities_to_geojson(entities) << "\n";
}

std::vector<Entity> load_entities_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ValidationError("cannot open '" + path + "'");
    std::vector<Entity> out;
    std::string line;
    std::size_t lineno = 0;
    Entity* cur = nullptr;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty()) continue;
        if (lineno == 1 && line.find("id") != std::string::npos &&
            line.find("kind") != std::string::npos)
            continue; // header
        std::stringstream ss(line);
        std::string id, kind, seq, xs, ys;
        if (!std::getline(ss, id, ',') || !std::getline(ss, kind, ',') ||
            !std::getline(ss, seq, ',') || !std::getline(ss, xs, ',') || !std::getline(ss, ys))
            throw ValidationError(path + ":" + std::to_string(lineno) + ": expected id,kind,seq,x,y");
        Point2D p;
        try {
            p = {std::stod(xs), std::stod(ys)};
        } catch (const std::exception&) {
            throw ValidationError(path + ":" + std::to_string(lineno) + ": bad coordinate");
        }
        if (cur == nullptr || cur->id != id) {
            Entity e;
            e.id = id;
            if (kind == "polygon") {
                e.kind = Kind::polygon;
                e.rings.emplace_back();
            } else if (kind == "segment") {
                e.kind = Kind::segment;
            } else {
                throw ValidationError(path + ":" + std::to_string(lineno) + ": kind must be polygon|segment");
            }
            out.push_back(std::move(e));
            cur = &out.back();
        }
        if (cur->kind == Kind::polygon)
            cur->rings[0].push_back(p);
        else
            cur->line.push_back(p);
    }
    return out;
}

std::vector<Entity> load_entities(const std::string& path) {
    const auto dot = path.rfind('.');
    const std::string ext = dot == std::string::npos ? "" : path.substr(dot);
    if (ext == ".csv") return load_entities_csv(path);
    return load_entities_geojson(path);
}

} // namespace pnact
