#include "geosurf/space_io.hpp"

#include <fstream>
#include <json.hpp>

namespace geosurf {

namespace {

using nlohmann::ordered_json;

Vertex dart_tail(const MetricSurface& space, int dart) {
  const EdgeSpec& e = space.edges()[dart / 2];
  return (dart & 1) ? e.v : e.u;
}

Vertex dart_head(const MetricSurface& space, int dart) {
  const EdgeSpec& e = space.edges()[dart / 2];
  return (dart & 1) ? e.u : e.v;
}

ordered_json space_document(const MetricSurface& space) {
  ordered_json doc;
  doc["family"] = to_string(space.family());
  ordered_json vertices = ordered_json::array();
  const auto& coords = space.coordinates();
  for (Vertex v = 0; v < space.vertex_count(); ++v) {
    ordered_json entry{{"id", v}};
    if (!coords.empty()) {
      entry["x"] = coords[v][0];
      entry["y"] = coords[v][1];
    }
    vertices.push_back(std::move(entry));
  }
  doc["vertices"] = std::move(vertices);
  ordered_json edges = ordered_json::array();
  for (const EdgeSpec& e : space.edges()) edges.push_back({e.u, e.v, e.length});
  doc["edges"] = std::move(edges);
  if (space.has_embedding()) {
    const Embedding& emb = space.embedding();
    ordered_json rotation = ordered_json::array();
    for (Vertex v = 0; v < space.vertex_count(); ++v) {
      ordered_json around = ordered_json::array();
      for (int dart : emb.rotation(v)) around.push_back(dart_head(space, dart));
      rotation.push_back(std::move(around));
    }
    doc["rotation"] = std::move(rotation);
    ordered_json outer = ordered_json::array();
    for (int dart : emb.face_darts(emb.outer_face())) {
      outer.push_back({dart_tail(space, dart), dart_head(space, dart)});
    }
    doc["outer_face"] = std::move(outer);
  }
  doc["origin"] = space.origin();
  if (space.grid()) {
    doc["grid"] = {{"cols", space.grid()->cols}, {"rows", space.grid()->rows}, {"spacing", space.grid()->spacing}};
  }
  if (space.snowflake_theta()) doc["snowflake_theta"] = *space.snowflake_theta();
  return doc;
}

}  // namespace

void write_space_json(std::ostream& out, const MetricSurface& space) { out << space_document(space).dump(1) << '\n'; }

SpaceDescription read_space_description(std::istream& in) {
  nlohmann::json doc;
  try {
    in >> doc;
  } catch (const nlohmann::json::exception& e) {
    fail(Errc::IoError, std::string("malformed space file: ") + e.what());
  }
  try {
    SpaceDescription spec;
    const auto& vertices = doc.at("vertices");
    spec.vertex_count = static_cast<std::int32_t>(vertices.size());
    bool coords = !vertices.empty();
    for (const auto& v : vertices) coords = coords && v.contains("x") && v.contains("y");
    if (coords) spec.coordinates.resize(spec.vertex_count);
    for (std::size_t i = 0; i < vertices.size(); ++i) {
      const auto& v = vertices[i];
      require(v.at("id").get<Vertex>() == static_cast<Vertex>(i), Errc::InvalidSpace,
              "vertex ids must be 0..n-1 in order");
      if (coords) spec.coordinates[i] = {v.at("x").get<double>(), v.at("y").get<double>()};
    }
    for (const auto& e : doc.at("edges")) {
      spec.edges.push_back({e.at(0).get<Vertex>(), e.at(1).get<Vertex>(), e.at(2).get<double>()});
    }
    if (doc.contains("rotation")) spec.rotation = doc["rotation"].get<std::vector<std::vector<Vertex>>>();
    if (doc.contains("outer_face") && !doc["outer_face"].empty()) {
      const auto& d = doc["outer_face"][0];
      spec.outer_dart = std::make_pair(d.at(0).get<Vertex>(), d.at(1).get<Vertex>());
    }
    spec.origin = doc.at("origin").get<Vertex>();
    if (doc.contains("family")) spec.family = family_from_string(doc["family"].get<std::string>());
    if (doc.contains("grid")) {
      const auto& g = doc["grid"];
      spec.grid = GridShape{g.at("cols").get<int>(), g.at("rows").get<int>(), g.at("spacing").get<double>()};
    }
    if (doc.contains("snowflake_theta")) spec.snowflake_theta = doc["snowflake_theta"].get<double>();
    return spec;
  } catch (const nlohmann::json::exception& e) {
    fail(Errc::InvalidSpace, std::string("space file field error: ") + e.what());
  }
}

MetricSurface read_space_json(std::istream& in) { return build_space(read_space_description(in)); }

void save_space(const std::string& path, const MetricSurface& space) {
  std::ofstream out(path);
  require(static_cast<bool>(out), Errc::IoError, "cannot write " + path);
  write_space_json(out, space);
}

MetricSurface load_space(const std::string& path) {
  std::ifstream in(path);
  require(static_cast<bool>(in), Errc::IoError, "cannot read " + path);
  return read_space_json(in);
}

void write_loop_json(std::ostream& out, const MetricSurface& space, const Loop& loop) {
  ordered_json edges = ordered_json::array();
  const auto& w = loop.waypoints;
  for (std::size_t i = 0; i < w.size() && w.size() > 1; ++i) {
    const Vertex a = w[i];
    const Vertex b = w[(i + 1) % w.size()];
    edges.push_back({a, b, space.edges()[space.edge_between(a, b)].length});
  }
  out << ordered_json{{"length", loop.length}, {"edges", edges}}.dump();
}

}  // namespace geosurf
