#pragma once
#include <string>
#include <vector>

#include "pnact/pnspace.hpp"

namespace pnact {

// FeatureCollection of Polygon / LineString features carrying an "id"
// property (string or number) and an optional "weight".
std::vector<Entity> entities_from_geojson(const std::string& text);
std::vector<Entity> load_entities_geojson(const std::string& path);
std::string entities_to_geojson(const std::vector<Entity>& entities);
void save_entities_geojson(const std::vector<Entity>& entities, const std::string& path);

// Flat vertex table: id,kind,seq,x,y with kind in {polygon, segment};
// rows for one id must be contiguous and seq ascending.
std::vector<Entity> load_entities_csv(const std::string& path);

// Dispatch on file extension (.json/.geojson vs .csv).
std::vector<Entity> load_entities(const std::string& path);

} // namespace pnact
