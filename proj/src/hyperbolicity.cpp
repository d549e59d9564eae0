#include "geosurf/hyperbolicity.hpp"

#include <algorithm>
#include <random>

#include "geosurf/parallel.hpp"
#include "geosurf/surrounding.hpp"

namespace geosurf {

namespace {

Geodesic unordered_geodesic(const MetricSurface& space, Vertex a, Vertex b) {
  return geodesic(space, std::min(a, b), std::max(a, b));
}

/// Waypoints of a geodesic oriented to start at `from`.
std::vector<Vertex> oriented(const Geodesic& g, Vertex from) {
  std::vector<Vertex> w = g.waypoints;
  if (!w.empty() && w.front() != from) std::reverse(w.begin(), w.end());
  return w;
}

}  // namespace

Triangle make_triangle(const MetricSurface& space, Vertex a, Vertex b, Vertex c) {
  Triangle t;
  t.corners = {a, b, c};
  for (int i = 0; i < 3; ++i) t.edges[i] = unordered_geodesic(space, t.corners[i], t.corners[(i + 1) % 3]);
  t.delta = thinness(space, t);
  return t;
}

double thinness(const MetricSurface& space, const Triangle& triangle) {
  double delta = 0.0;
  for (int i = 0; i < 3; ++i) {
    const auto& target = triangle.edges[i].waypoints;
    require(!target.empty(), Errc::InvalidCurve, "triangle edge is empty");
    std::vector<Vertex> others;
    for (int j = 1; j <= 2; ++j) {
      const auto& w = triangle.edges[(i + j) % 3].waypoints;
      others.insert(others.end(), w.begin(), w.end());
    }
    const VertexSet sources = make_vertex_set(std::move(others));
    for (double d : space.distance_to_set(sources, target)) delta = std::max(delta, d);
  }
  return delta;
}

double triangle_perimeter(const Triangle& triangle) {
  return triangle.edges[0].length + triangle.edges[1].length + triangle.edges[2].length;
}

FatScan fat_triangle_scan(const MetricSurface& space, Vertex center, double r, double M,
                          std::size_t budget, std::uint64_t seed) {
  require_geodesic(space, "fat_triangle_scan");
  space.check_vertex(center);
  require(M > 1.0, Errc::BadParameters, "M must exceed 1");
  require(r >= 0.0, Errc::NegativeRadius, "radius must be nonnegative");
  require(budget > 0, Errc::BadParameters, "budget must be positive");
  FatScan out;
  out.seed = seed;
  const VertexSet points = ball(space, center, r);
  double local_mesh = 0.0;
  for (Vertex v : points) {
    for (const Neighbor& nb : space.neighbors(v)) {
      if (set_contains(points, nb.to)) local_mesh = std::max(local_mesh, nb.length);
    }
  }
  if (points.size() < 3 || r < 2.0 * local_mesh * (1 - kTolerance)) {
    out.certificate = "resolution-floor";
    return out;
  }
  const double threshold = r / M;
  const std::size_t k = points.size();
  const double triples = static_cast<double>(k) * (k - 1) * (k - 2) / 6.0;
  std::vector<std::array<Vertex, 3>> candidates;
  if (triples <= static_cast<double>(budget)) {
    for (std::size_t i = 0; i < k; ++i)
      for (std::size_t j = i + 1; j < k; ++j)
        for (std::size_t l = j + 1; l < k; ++l) candidates.push_back({points[i], points[j], points[l]});
    out.certificate = "exhaustive";
  } else {
    std::mt19937_64 rng(seed);
    std::uniform_int_distribution<std::size_t> pick(0, k - 1);
    while (candidates.size() < budget) {
      std::array<std::size_t, 3> idx{pick(rng), pick(rng), pick(rng)};
      if (idx[0] == idx[1] || idx[1] == idx[2] || idx[0] == idx[2]) continue;
      std::sort(idx.begin(), idx.end());
      candidates.push_back({points[idx[0]], points[idx[1]], points[idx[2]]});
    }
    out.certificate = "sampled(" + std::to_string(budget) + ")";
  }
  constexpr std::size_t kBlock = 1024;
  std::vector<double> deltas(kBlock);
  for (std::size_t start = 0; start < candidates.size(); start += kBlock) {
    const std::size_t count = std::min(kBlock, candidates.size() - start);
    parallel_for(count, [&](std::size_t i) {
      const auto& c = candidates[start + i];
      deltas[i] = make_triangle(space, c[0], c[1], c[2]).delta;
    });
    for (std::size_t i = 0; i < count; ++i) {
      ++out.examined;
      out.max_delta = std::max(out.max_delta, deltas[i]);
      if (deltas[i] > threshold + kTolerance * std::max(1.0, threshold)) {
        const auto& c = candidates[start + i];
        out.triangle = make_triangle(space, c[0], c[1], c[2]);
        return out;
      }
    }
  }
  return out;
}

double four_point_delta(const MetricSurface& space, const std::vector<Quadruple>& quadruples) {
  double out = 0.0;
  for (const Quadruple& q : quadruples) {
    for (int i = 0; i < 4; ++i) {
      space.check_vertex(q[i]);
      for (int j = i + 1; j < 4; ++j) {
        require(q[i] != q[j], Errc::RepeatedVertex, "quadruple repeats vertex " + std::to_string(q[i]));
      }
    }
    auto d = [&](int i, int j) { return distance(space, q[i], q[j]); };
    std::array<double, 3> sums{d(0, 1) + d(2, 3), d(0, 2) + d(1, 3), d(0, 3) + d(1, 2)};
    std::sort(sums.begin(), sums.end());
    out = std::max(out, (sums[2] - sums[1]) / 2.0);
  }
  return out;
}

std::vector<Quadruple> all_quadruples(std::span<const Vertex> vertices) {
  std::vector<Quadruple> out;
  const std::size_t k = vertices.size();
  for (std::size_t a = 0; a < k; ++a)
    for (std::size_t b = a + 1; b < k; ++b)
      for (std::size_t c = b + 1; c < k; ++c)
        for (std::size_t d = c + 1; d < k; ++d) out.push_back({vertices[a], vertices[b], vertices[c], vertices[d]});
  return out;
}

Loop triangle_loop(const MetricSurface& space, const Triangle& triangle) {
  std::vector<Vertex> walk;
  for (int i = 0; i < 3; ++i) {
    const auto w = oriented(triangle.edges[i], triangle.corners[i]);
    walk.insert(walk.end(), w.begin(), w.end() - 1);
  }
  if (walk.empty()) walk.push_back(triangle.corners[0]);
  return make_loop(space, std::move(walk));
}

SurroundedBall surrounded_ball_from_fat_triangle(const MetricSurface& space, const Triangle& triangle,
                                                 double R) {
  require_geodesic(space, "surrounded_ball_from_fat_triangle");
  require(R > 0.0, Errc::BadRadii, "R must be positive");
  require(triangle.delta >= R * (1 - kTolerance), Errc::NotFatEnough,
          "triangle thinness " + std::to_string(triangle.delta) + " is below R = " + std::to_string(R));
  const Loop outline = triangle_loop(space, triangle);
  const auto components = bounded_components(space, outline);
  require(!components.empty(), Errc::NoBoundedComponent, "the triangle encloses no vertex");
  const VertexSet edge_union = make_vertex_set(outline.waypoints);
  SurroundedBall best;
  best.depth = -1.0;
  for (const VertexSet& component : components) {
    const auto depth = space.distance_to_set(edge_union, component);
    for (std::size_t i = 0; i < component.size(); ++i) {
      if (depth[i] > best.depth + kTolerance * std::max(1.0, depth[i])) {
        best.depth = depth[i];
        best.center = component[i];
        best.component = component;
      }
    }
  }
  const auto from_center = space.distances_from(best.center);
  best.radius = 0.0;
  for (double d : *from_center) {
    if (d < best.depth * (1 - kTolerance)) best.radius = std::max(best.radius, d);
  }
  require(best.radius >= R / 10.0 * (1 - kTolerance), Errc::NoBoundedComponent,
          "deepest enclosed ball has radius " + std::to_string(best.radius) + " < R/10");
  const VertexSet inner = ball(space, best.center, best.radius);
  best.disjoint = std::none_of(inner.begin(), inner.end(), [&](Vertex v) { return set_contains(edge_union, v); });
  best.surrounded = best.disjoint && surrounds(space, outline, inner);
  return best;
}

std::string to_string(Scale scale) { return scale == Scale::Fat ? "FAT" : "THIN"; }

std::vector<DichotomyRow> dichotomy_scan(const MetricSurface& space, Vertex center,
                                         const std::vector<double>& radii, double M,
                                         std::size_t budget, std::uint64_t seed) {
  require(!radii.empty(), Errc::BadRadii, "no radii given");
  std::vector<DichotomyRow> rows;
  for (double r : radii) {
    require(r > 0.0, Errc::BadRadii, "radii must be positive");
    DichotomyRow row;
    row.r = r;
    row.scan = fat_triangle_scan(space, center, r, M, budget, seed);
    row.classification = row.scan.triangle ? Scale::Fat : Scale::Thin;
    row.delta_ratio = (row.scan.triangle ? row.scan.triangle->delta : row.scan.max_delta) / r;
    rows.push_back(std::move(row));
  }
  return rows;
}

}  // namespace geosurf
