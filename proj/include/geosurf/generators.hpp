#pragma once

#include <array>
#include <functional>
#include <map>
#include <vector>

#include "geosurf/metric_surface.hpp"

namespace geosurf {

/// Positive weight over integer grid coordinates.
using GridFactor = std::function<double(int x, int y)>;

MetricSurface euclidean_grid(int n, double s);
/// Edge (u,v) gets length s*(factor(u)+factor(v))/2; every factor value must
/// lie in [1/bound, bound].
MetricSurface conformal_grid(int n, double s, const GridFactor& factor, double bound);
MetricSurface hyperbolic_grid(int n, double curvature_scale);
MetricSurface tree(int branching, int depth, double s);
MetricSurface snowflake_grid(int n, double s, double theta);

/// 2/(1-q^2) with q = min(rho/rho_max, 0.9).
double hyperbolic_factor(int n, int x, int y);

/// Planar straight-line space: rotation from edge angles, outer face by signed area.
MetricSurface straight_line_space(const std::vector<std::array<double, 2>>& coordinates,
                                  const std::vector<EdgeSpec>& edges, Vertex origin);

/// Vertex id of grid point (x, y); throws BadParameters outside the grid.
Vertex grid_vertex(const MetricSurface& space, int x, int y);
std::array<int, 2> grid_point(const MetricSurface& space, Vertex v);
bool is_grid_family(const MetricSurface& space);

enum class MapKind { Translations, Rotations, Shears };
std::string to_string(MapKind kind);
MapKind map_kind_from_string(const std::string& name);

/// Certified maps sending the region center to every vertex of
/// ball(center, target_radius) whose images stay in the grid.
std::vector<BiLipMap> map_suite(const MetricSurface& space, MapKind kind,
                                const RegionSpec& domain_region, double target_radius);

struct CuttingFamily {
  std::map<Vertex, std::vector<Vertex>> curves;
  double constant = 1.0;
};

/// Arc-length biLipschitz constant of a vertex path.
double curve_constant(const MetricSurface& space, const std::vector<Vertex>& path);

CuttingFamily cutting_family(const MetricSurface& space, const RegionSpec& region);

}  // namespace geosurf
