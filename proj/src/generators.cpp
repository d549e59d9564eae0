#include "geosurf/generators.hpp"

#include <cmath>
#include <numbers>

namespace geosurf {

namespace {

SpaceDescription grid_description(int n, double s, const GridFactor& factor) {
  SpaceDescription spec;
  spec.vertex_count = n * n;
  spec.grid = GridShape{n, n, s};
  spec.origin = (n / 2) * n + n / 2;
  spec.outer_dart = std::make_pair(Vertex{1}, Vertex{0});
  std::vector<std::vector<Vertex>> rotation(n * n);
  auto id = [n](int x, int y) { return y * n + x; };
  for (int y = 0; y < n; ++y) {
    for (int x = 0; x < n; ++x) {
      spec.coordinates.push_back({static_cast<double>(x), static_cast<double>(y)});
      const double fu = factor(x, y);
      if (x + 1 < n) spec.edges.push_back({id(x, y), id(x + 1, y), s * (fu + factor(x + 1, y)) / 2});
      if (y + 1 < n) spec.edges.push_back({id(x, y), id(x, y + 1), s * (fu + factor(x, y + 1)) / 2});
      auto& around = rotation[id(x, y)];
      if (x + 1 < n) around.push_back(id(x + 1, y));
      if (y + 1 < n) around.push_back(id(x, y + 1));
      if (x > 0) around.push_back(id(x - 1, y));
      if (y > 0) around.push_back(id(x, y - 1));
    }
  }
  spec.rotation = std::move(rotation);
  return spec;
}

void check_grid_size(int n, double s) {
  require(n >= 3, Errc::BadParameters, "grid size must be at least 3");
  require(std::isfinite(s) && s > 0.0, Errc::BadParameters, "grid spacing must be positive");
}

}  // namespace

MetricSurface euclidean_grid(int n, double s) {
  check_grid_size(n, s);
  auto spec = grid_description(n, s, [](int, int) { return 1.0; });
  spec.family = Family::EuclideanGrid;
  return build_space(spec);
}

MetricSurface conformal_grid(int n, double s, const GridFactor& factor, double bound) {
  check_grid_size(n, s);
  require(factor != nullptr, Errc::BadParameters, "conformal factor is missing");
  require(std::isfinite(bound) && bound >= 1.0, Errc::BadParameters,
          "factor bound must be at least 1");
  for (int y = 0; y < n; ++y) {
    for (int x = 0; x < n; ++x) {
      const double f = factor(x, y);
      require(std::isfinite(f) && f >= 1.0 / bound * (1 - kTolerance) &&
                  f <= bound * (1 + kTolerance),
              Errc::UnboundedFactor,
              "factor " + std::to_string(f) + " at (" + std::to_string(x) + "," +
                  std::to_string(y) + ") outside [1/F, F]");
    }
  }
  auto spec = grid_description(n, s, factor);
  spec.family = Family::ConformalGrid;
  return build_space(spec);
}

double hyperbolic_factor(int n, int x, int y) {
  const double c = (n - 1) / 2.0;
  const double q = std::min(std::hypot(x - c, y - c) / c, 0.9);
  return 2.0 / (1.0 - q * q);
}

MetricSurface hyperbolic_grid(int n, double curvature_scale) {
  check_grid_size(n, curvature_scale);
  auto spec = grid_description(n, curvature_scale,
                               [n](int x, int y) { return hyperbolic_factor(n, x, y); });
  spec.family = Family::HyperbolicGrid;
  return build_space(spec);
}

MetricSurface tree(int branching, int depth, double s) {
  require(branching >= 2, Errc::BadParameters, "branching must be at least 2");
  require(depth >= 1, Errc::BadParameters, "depth must be at least 1");
  require(std::isfinite(s) && s > 0.0, Errc::BadParameters, "edge length must be positive");
  long count = 1;
  long level = 1;
  for (int d = 0; d < depth; ++d) {
    level *= branching;
    count += level;
    require(count <= 5'000'000, Errc::BadParameters, "tree too large");
  }
  SpaceDescription spec;
  spec.vertex_count = static_cast<std::int32_t>(count);
  spec.origin = 0;
  spec.family = Family::Tree;
  for (Vertex v = 1; v < count; ++v) spec.edges.push_back({(v - 1) / branching, v, s});
  return build_space(spec);
}

MetricSurface snowflake_grid(int n, double s, double theta) {
  check_grid_size(n, s);
  require(theta > 0.0 && theta < 1.0, Errc::BadParameters, "snowflake exponent must lie in (0,1)");
  auto spec = grid_description(n, s, [](int, int) { return 1.0; });
  spec.snowflake_theta = theta;
  spec.family = Family::SnowflakeGrid;
  return build_space(spec);
}

MetricSurface straight_line_space(const std::vector<std::array<double, 2>>& coordinates,
                                  const std::vector<EdgeSpec>& edges, Vertex origin) {
  SpaceDescription spec;
  spec.vertex_count = static_cast<std::int32_t>(coordinates.size());
  spec.coordinates = coordinates;
  spec.edges = edges;
  spec.origin = origin;
  std::vector<std::vector<Vertex>> rotation(coordinates.size());
  for (const EdgeSpec& e : edges) {
    require(e.u >= 0 && e.u < spec.vertex_count && e.v >= 0 && e.v < spec.vertex_count,
            Errc::UnknownVertex, "edge endpoint out of range");
    rotation[e.u].push_back(e.v);
    rotation[e.v].push_back(e.u);
  }
  for (std::size_t v = 0; v < rotation.size(); ++v) {
    auto angle = [&](Vertex w) {
      return std::atan2(coordinates[w][1] - coordinates[v][1], coordinates[w][0] - coordinates[v][0]);
    };
    std::sort(rotation[v].begin(), rotation[v].end(),
              [&](Vertex a, Vertex b) { return angle(a) < angle(b); });
  }
  spec.rotation = std::move(rotation);
  return build_space(spec);
}

bool is_grid_family(const MetricSurface& space) {
  return space.grid().has_value() &&
         (space.family() == Family::EuclideanGrid || space.family() == Family::ConformalGrid ||
          space.family() == Family::HyperbolicGrid || space.family() == Family::SnowflakeGrid);
}

Vertex grid_vertex(const MetricSurface& space, int x, int y) {
  require(space.grid().has_value(), Errc::UnsupportedFamily, "space is not a grid");
  const GridShape& g = *space.grid();
  require(x >= 0 && x < g.cols && y >= 0 && y < g.rows, Errc::BadParameters,
          "grid point (" + std::to_string(x) + "," + std::to_string(y) + ") outside the grid");
  return y * g.cols + x;
}

std::array<int, 2> grid_point(const MetricSurface& space, Vertex v) {
  require(space.grid().has_value(), Errc::UnsupportedFamily, "space is not a grid");
  space.check_vertex(v);
  return {v % space.grid()->cols, v / space.grid()->cols};
}

std::string to_string(MapKind kind) {
  switch (kind) {
    case MapKind::Translations: return "translations";
    case MapKind::Rotations: return "rotations";
    case MapKind::Shears: return "shears";
  }
  return "translations";
}

MapKind map_kind_from_string(const std::string& name) {
  for (MapKind k : {MapKind::Translations, MapKind::Rotations, MapKind::Shears}) {
    if (to_string(k) == name) return k;
  }
  fail(Errc::BadParameters, "unknown map kind '" + name + "'");
}

std::vector<BiLipMap> map_suite(const MetricSurface& space, MapKind kind,
                                const RegionSpec& domain_region, double target_radius) {
  require(is_grid_family(space), Errc::UnsupportedFamily,
          "map suites need a grid-family space, got " + to_string(space.family()));
  validate_region(space, domain_region);
  require(target_radius >= 0.0, Errc::BadParameters, "target radius must be nonnegative");
  const auto [cx, cy] = grid_point(space, domain_region.center);
  using Transform = std::function<std::array<int, 2>(int, int)>;
  std::vector<Transform> variants;
  auto half_floor = [](int d) { return static_cast<int>(std::floor(d / 2.0)); };
  switch (kind) {
    case MapKind::Translations:
      variants.push_back([](int x, int y) { return std::array{x, y}; });
      break;
    case MapKind::Rotations:
      variants.push_back([=](int x, int y) { return std::array{cx - (y - cy), cy + (x - cx)}; });
      variants.push_back([=](int x, int y) { return std::array{2 * cx - x, 2 * cy - y}; });
      variants.push_back([=](int x, int y) { return std::array{cx + (y - cy), cy - (x - cx)}; });
      break;
    case MapKind::Shears:
      variants.push_back([=](int x, int y) { return std::array{x, y + half_floor(x - cx)}; });
      variants.push_back([=](int x, int y) { return std::array{x, y - half_floor(x - cx)}; });
      variants.push_back([=](int x, int y) { return std::array{x + half_floor(y - cy), y}; });
      variants.push_back([=](int x, int y) { return std::array{x - half_floor(y - cy), y}; });
      break;
  }
  const VertexSet domain = ball(space, domain_region);
  const VertexSet targets = ball(space, domain_region.center, target_radius);
  const GridShape& g = *space.grid();
  std::vector<BiLipMap> suite;
  for (const Transform& t : variants) {
    for (Vertex target : targets) {
      const auto [tx, ty] = grid_point(space, target);
      std::vector<Vertex> images;
      bool inside = true;
      for (Vertex v : domain) {
        const auto [x, y] = grid_point(space, v);
        const auto [ix, iy] = t(x, y);
        const int fx = ix + tx - cx;
        const int fy = iy + ty - cy;
        if (fx < 0 || fx >= g.cols || fy < 0 || fy >= g.rows) {
          inside = false;
          break;
        }
        images.push_back(fy * g.cols + fx);
      }
      if (!inside) continue;
      suite.push_back(certify_bilip(space, domain, images));
    }
  }
  return suite;
}

double curve_constant(const MetricSurface& space, const std::vector<Vertex>& path) {
  std::vector<double> arc{0.0};
  for (std::size_t i = 1; i < path.size(); ++i) {
    const int e = space.edge_between(path[i - 1], path[i]);
    require(e >= 0, Errc::InvalidCurve, "curve waypoints share no edge");
    arc.push_back(arc.back() + space.edges()[e].length);
  }
  double constant = 1.0;
  for (std::size_t i = 0; i < path.size(); ++i) {
    const auto row = space.distances_from(path[i]);
    for (std::size_t j = i + 1; j < path.size(); ++j) {
      const double d = (*row)[path[j]];
      require(d > 0.0, Errc::InvalidCurve, "curve revisits a vertex");
      const double a = arc[j] - arc[i];
      constant = std::max(constant, std::max(a / d, d / a));
    }
  }
  return constant;
}

CuttingFamily cutting_family(const MetricSurface& space, const RegionSpec& region) {
  require_geodesic(space, "cutting_family");
  validate_region(space, region);
  const VertexSet inside = ball(space, region);
  CuttingFamily family;
  if (is_grid_family(space)) {
    const GridShape& g = *space.grid();
    std::map<int, std::vector<Vertex>> rows;
    for (Vertex p : inside) {
      const int y = grid_point(space, p)[1];
      auto it = rows.find(y);
      if (it == rows.end()) {
        std::vector<Vertex> row;
        for (int x = 0; x < g.cols; ++x) row.push_back(y * g.cols + x);
        require(!set_contains(inside, row.front()) && !set_contains(inside, row.back()),
                Errc::BadRegion, "region touches the grid boundary in row " + std::to_string(y));
        family.constant = std::max(family.constant, curve_constant(space, row));
        it = rows.emplace(y, std::move(row)).first;
      }
      family.curves.emplace(p, it->second);
    }
    return family;
  }
  require(space.family() == Family::Tree, Errc::UnsupportedFamily,
          "cutting curves need a grid or tree space, got " + to_string(space.family()));
  // Tree vertices are numbered level by level; children of v are the next ids
  // after v * branching.
  const Vertex n = space.vertex_count();
  const int branching = static_cast<int>(space.neighbors(0).size());
  auto first_child = [&](Vertex v) { return v * branching + 1; };
  for (Vertex p : inside) {
    Vertex a = p;
    while (first_child(a) < n) a = first_child(a);
    require(!set_contains(inside, a), Errc::BadRegion,
            "no ray from vertex " + std::to_string(p) + " leaves the region");
    const auto& from_a = *space.distances_from(a);
    const auto& from_p = *space.distances_from(p);
    Vertex b = -1;
    for (Vertex leaf = 0; leaf < n; ++leaf) {
      if (first_child(leaf) < n || leaf == a) continue;
      if (!nearly_equal(from_a[p] + from_p[leaf], from_a[leaf])) continue;
      if (b < 0 || from_a[leaf] > from_a[b]) b = leaf;
    }
    require(b >= 0 && !set_contains(inside, b), Errc::BadRegion,
            "no ray pair through vertex " + std::to_string(p) + " leaves the region");
    family.curves.emplace(p, geodesic(space, a, b).waypoints);
  }
  return family;
}

}  // namespace geosurf
