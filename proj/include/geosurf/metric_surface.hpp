#pragma once

#include <algorithm>
#include <array>
#include <cstdint>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "geosurf/error.hpp"

namespace geosurf {

using Vertex = std::int32_t;
/// Sorted, duplicate-free list of vertex ids.
using VertexSet = std::vector<Vertex>;

/// Relative slack used for every closed-ball and equal-length comparison.
inline constexpr double kTolerance = 1e-9;

inline bool within_radius(double d, double r) {
  return d <= r + kTolerance * (r > 1.0 ? r : 1.0);
}
inline bool nearly_equal(double a, double b) {
  const double scale = std::max({1.0, a < 0 ? -a : a, b < 0 ? -b : b});
  return (a > b ? a - b : b - a) <= kTolerance * scale;
}

struct EdgeSpec {
  Vertex u = 0;
  Vertex v = 0;
  double length = 1.0;
};

/// Shape metadata for spaces produced by the grid generators. Vertex (x, y)
/// has id y * cols + x.
struct GridShape {
  int cols = 0;
  int rows = 0;
  double spacing = 1.0;
};

enum class Family { Custom, EuclideanGrid, ConformalGrid, HyperbolicGrid, Tree, SnowflakeGrid };

std::string to_string(Family family);
Family family_from_string(const std::string& name);

/// Raw input to build_space(). Ids are 0..vertex_count-1.
struct SpaceDescription {
  std::int32_t vertex_count = 0;
  std::vector<std::array<double, 2>> coordinates;  // empty, or one per vertex; plotting only
  std::vector<EdgeSpec> edges;
  std::optional<std::vector<std::vector<Vertex>>> rotation;  // counterclockwise neighbor order
  std::optional<std::pair<Vertex, Vertex>> outer_dart;       // a dart with the outer face on its left
  Vertex origin = -1;
  std::optional<double> snowflake_theta;  // metric override d -> d^theta
  std::optional<GridShape> grid;
  Family family = Family::Custom;
};

/// Combinatorial embedding derived from a rotation system. Dart 2e runs
/// edge e from its first to its second endpoint, dart 2e+1 the other way.
struct EmbeddingBuilder;

class Embedding {
 public:
  int face_count() const { return static_cast<int>(face_darts_.size()); }
  int outer_face() const { return outer_face_; }
  int left_face(int dart) const { return dart_face_[dart]; }
  const std::vector<int>& face_darts(int face) const { return face_darts_[face]; }
  /// Outgoing darts of v in counterclockwise order.
  std::span<const int> rotation(Vertex v) const {
    return {rot_darts_.data() + rot_offset_[v], rot_darts_.data() + rot_offset_[v + 1]};
  }
  int rotation_index(int dart) const { return rot_index_[dart]; }
  /// Next dart along the boundary of the face on the left of `dart`.
  int face_next(int dart) const { return face_next_[dart]; }
  bool on_outer_face(Vertex v) const { return outer_vertex_[v] != 0; }
  const std::vector<int>& faces_at(Vertex v) const { return vertex_faces_[v]; }

 private:
  friend class MetricSurface;
  friend struct EmbeddingBuilder;
  std::vector<int> rot_offset_;
  std::vector<int> rot_darts_;
  std::vector<int> rot_index_;
  std::vector<int> face_next_;
  std::vector<int> dart_face_;
  std::vector<std::vector<int>> face_darts_;
  std::vector<std::vector<int>> vertex_faces_;
  std::vector<char> outer_vertex_;
  int outer_face_ = -1;
};

struct Neighbor {
  Vertex to;
  double length;
  int edge;
};

class DistanceCache;

/// Finite edge-weighted connected graph standing in for a geodesic surface.
/// Immutable after build_space(); copies share the distance cache.
class MetricSurface {
 public:
  std::int32_t vertex_count() const { return static_cast<std::int32_t>(adj_offset_.size()) - 1; }
  std::int32_t edge_count() const { return static_cast<std::int32_t>(edges_.size()); }
  const std::vector<EdgeSpec>& edges() const { return edges_; }
  std::span<const Neighbor> neighbors(Vertex v) const {
    return {adj_.data() + adj_offset_[v], adj_.data() + adj_offset_[v + 1]};
  }
  /// Edge id joining u and v, or -1.
  int edge_between(Vertex u, Vertex v) const;

  Vertex origin() const { return origin_; }
  double mesh() const { return mesh_; }
  double min_edge() const { return min_edge_; }
  bool geodesic() const { return !snowflake_theta_.has_value(); }
  std::optional<double> snowflake_theta() const { return snowflake_theta_; }
  Family family() const { return family_; }
  const std::optional<GridShape>& grid() const { return grid_; }
  const std::vector<std::array<double, 2>>& coordinates() const { return coordinates_; }
  bool has_embedding() const { return embedding_ != nullptr; }
  const Embedding& embedding() const;
  bool contains(Vertex v) const { return v >= 0 && v < vertex_count(); }
  void check_vertex(Vertex v) const;

  /// Metric value of a base (edge-induced) path length.
  double metric_from_base(double base) const;
  /// Base path length corresponding to a metric radius.
  double base_from_metric(double metric) const;

  /// Single-source distances (metric values) for every vertex, cached.
  std::shared_ptr<const std::vector<double>> distances_from(Vertex source) const;
  /// Vertices within metric distance r of any source, with their distances.
  std::vector<std::pair<Vertex, double>> reach(std::span<const Vertex> sources, double r) const;
  /// Metric distance to the nearest source for each vertex in `targets`;
  /// the search stops once every target is settled.
  std::vector<double> distance_to_set(std::span<const Vertex> sources,
                                      std::span<const Vertex> targets) const;

 private:
  friend MetricSurface build_space(const SpaceDescription&);
  std::vector<int> adj_offset_;
  std::vector<Neighbor> adj_;
  std::vector<EdgeSpec> edges_;
  std::vector<std::array<double, 2>> coordinates_;
  std::shared_ptr<const Embedding> embedding_;
  Vertex origin_ = 0;
  double mesh_ = 0.0;
  double min_edge_ = 0.0;
  std::optional<double> snowflake_theta_;
  std::optional<GridShape> grid_;
  Family family_ = Family::Custom;
  std::shared_ptr<DistanceCache> cache_;
};

/// Closed ball B(center, radius) used to designate interior regions.
struct RegionSpec {
  Vertex center = 0;
  double radius = 1.0;
};

struct Geodesic {
  std::vector<Vertex> waypoints;
  double length = 0.0;
};

/// Closed edge walk; waypoints are listed once (the closing edge runs from
/// the last waypoint back to the first).
struct Loop {
  std::vector<Vertex> waypoints;
  double length = 0.0;
  bool simple = true;
};

/// Vertex injection with its certified biLipschitz constant.
class BiLipMap {
 public:
  BiLipMap() = default;
  BiLipMap(VertexSet domain, std::vector<Vertex> images, double constant, bool exact,
           std::size_t pairs_checked);

  const VertexSet& domain() const { return domain_; }
  const std::vector<Vertex>& images() const { return images_; }
  double constant() const { return constant_; }
  bool exact() const { return exact_; }
  std::size_t pairs_checked() const { return pairs_checked_; }
  std::optional<Vertex> image(Vertex v) const;
  std::optional<Vertex> preimage(Vertex w) const;
  bool in_domain(Vertex v) const;

 private:
  VertexSet domain_;
  std::vector<Vertex> images_;
  std::vector<std::pair<Vertex, Vertex>> inverse_;  // sorted by image
  double constant_ = 1.0;
  bool exact_ = true;
  std::size_t pairs_checked_ = 0;
};

MetricSurface build_space(const SpaceDescription& spec);

double distance(const MetricSurface& space, Vertex p, Vertex q);
Geodesic geodesic(const MetricSurface& space, Vertex p, Vertex q);
VertexSet ball(const MetricSurface& space, Vertex p, double r);
VertexSet ball(const MetricSurface& space, const RegionSpec& region);
Loop exterior_boundary(const MetricSurface& space, std::span<const Vertex> ball_set);

/// All-pairs certification up to kExactCertificationLimit domain vertices,
/// seeded pair sampling above it.
inline constexpr std::size_t kExactCertificationLimit = 2000;
BiLipMap certify_bilip(const MetricSurface& space, std::span<const Vertex> domain,
                       std::span<const Vertex> images, std::uint64_t sample_seed = 0x5eed,
                       std::size_t sample_pairs = 200000);

/// Validates that the region's ball is a strict subset of the vertex set.
void validate_region(const MetricSurface& space, const RegionSpec& region);

/// Sum of edge lengths along a closed walk; throws InvalidCurve on a missing edge.
double walk_length(const MetricSurface& space, std::span<const Vertex> waypoints, bool closed);
Loop make_loop(const MetricSurface& space, std::vector<Vertex> waypoints);

/// Diameter of a vertex set under the space metric.
double set_diameter(const MetricSurface& space, std::span<const Vertex> vertices);

bool is_acyclic(const MetricSurface& space);
void require_geodesic(const MetricSurface& space, const char* operation);

VertexSet make_vertex_set(std::vector<Vertex> vertices);
bool set_contains(const VertexSet& set, Vertex v);

}  // namespace geosurf
