#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "geosurf/metric_surface.hpp"

namespace geosurf {

/// Geodesic triangle; edges[i] joins corners[i] and corners[(i+1)%3], each
/// computed as geodesic(min id, max id).
struct Triangle {
  std::array<Vertex, 3> corners{};
  std::array<Geodesic, 3> edges;
  double delta = 0.0;
};

Triangle make_triangle(const MetricSurface& space, Vertex a, Vertex b, Vertex c);

/// Max over edges and their waypoints of the distance to the other two edges.
double thinness(const MetricSurface& space, const Triangle& triangle);

double triangle_perimeter(const Triangle& triangle);

struct FatScan {
  std::optional<Triangle> triangle;
  std::string certificate;  // "exhaustive", "sampled(n)" or "resolution-floor"
  std::size_t examined = 0;
  double max_delta = 0.0;   // over examined triangles
  std::uint64_t seed = 0;
};

inline constexpr std::size_t kDefaultScanBudget = 20000;

/// First triangle with corners in ball(center, r) and thinness > r/M, in
/// lexicographic corner order (exhaustive) or seeded sample order.
FatScan fat_triangle_scan(const MetricSurface& space, Vertex center, double r, double M,
                          std::size_t budget = kDefaultScanBudget, std::uint64_t seed = 0);

using Quadruple = std::array<Vertex, 4>;

/// Max over quadruples of (largest pairing sum - second largest) / 2.
double four_point_delta(const MetricSurface& space, const std::vector<Quadruple>& quadruples);

/// Every 4-subset of the vertices in increasing order.
std::vector<Quadruple> all_quadruples(std::span<const Vertex> vertices);

struct SurroundedBall {
  Vertex center = 0;
  double radius = 0.0;  // largest vertex distance below the depth
  double depth = 0.0;   // distance from the center to the triangle
  VertexSet component;
  bool disjoint = false;
  bool surrounded = false;
};

/// Closed walk running along the three edges.
Loop triangle_loop(const MetricSurface& space, const Triangle& triangle);

/// Deepest vertex of the bounded complementary components of the triangle;
/// requires thinness >= R and a ball of radius >= R/10.
SurroundedBall surrounded_ball_from_fat_triangle(const MetricSurface& space, const Triangle& triangle,
                                                 double R);

enum class Scale { Fat, Thin };
std::string to_string(Scale scale);

struct DichotomyRow {
  double r = 0.0;
  Scale classification = Scale::Thin;
  FatScan scan;
  double delta_ratio = 0.0;  // delta / r of the witness, or max_delta / r
};

std::vector<DichotomyRow> dichotomy_scan(const MetricSurface& space, Vertex center,
                                         const std::vector<double>& radii, double M,
                                         std::size_t budget = kDefaultScanBudget,
                                         std::uint64_t seed = 0);

}  // namespace geosurf
