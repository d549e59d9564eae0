#pragma once

#include <numbers>
#include <optional>
#include <vector>

#include "geosurf/metric_surface.hpp"

namespace geosurf {

/// ω(2)/ω(1)² with ω(1) = 2, ω(2) = π.
inline constexpr double kCoareaConstant = std::numbers::pi / 4.0;

/// N = max over region points p and scales R of the greedy cover of
/// ball(p, 2R) by R-balls.
int doubling_constant(const MetricSurface& space, const RegionSpec& region,
                      const std::vector<double>& scales);

struct AssouadSample {
  Vertex p = 0;
  double r = 0.0;
  double delta = 0.0;
};

struct AssouadSampleCount {
  AssouadSample sample;
  std::size_t count = 0;      // |N_delta ∩ B(p,r)|
  std::size_t ball_size = 0;  // |B(p,r)|
};

/// Fit of log count against log(scale ratio). Saturated samples (every
/// vertex counted) are dropped; the slope comes from the finest octave of the
/// remaining samples and C from the upper envelope of that fit.
struct ScalingFit {
  double exponent = 0.0;
  double constant = 0.0;
  double full_range_exponent = 0.0;
  std::vector<double> residuals;
  std::size_t used = 0;
};

struct AssouadEstimate {
  ScalingFit fit;
  std::vector<AssouadSampleCount> counts;
};

AssouadEstimate assouad_estimate(const MetricSurface& space, const std::vector<AssouadSample>& samples);

/// All (p, r, delta) combinations with delta < r.
std::vector<AssouadSample> assouad_grid(std::span<const Vertex> points, const std::vector<double>& radii,
                                        const std::vector<double>& deltas);

struct HausdorffEstimate {
  double alpha = 0.0;
  double spread = 0.0;  // max - min over seeds
  std::vector<double> per_seed;
  ScalingFit fit;       // first seed
  std::vector<std::size_t> counts;  // first seed, one per epsilon
};

/// c_eps = |N_eps ∩ B(origin, unit_radius)| regressed against 1/eps; the
/// unit radius defaults to 4 * max epsilon.
HausdorffEstimate hausdorff_dim_estimate(const MetricSurface& space, Vertex origin,
                                         const std::vector<double>& epsilons,
                                         const std::vector<std::uint64_t>& seeds = {0, 1, 2},
                                         std::optional<double> unit_radius = std::nullopt);

double hausdorff1_length(const MetricSurface& space, const Loop& loop);
double hausdorff1_length(const MetricSurface& space, const Geodesic& path);

/// Largest distance from a region vertex to the complement (infinite when
/// the region is everything).
double inradius(const MetricSurface& space, const VertexSet& region);

/// |N_eps ∩ region| * (2 eps)^2 with the net swept over the region.
double hausdorff2_estimate(const MetricSurface& space, const VertexSet& region, double epsilon,
                           std::uint64_t seed = 0);

struct CoareaShell {
  double t = 0.0;
  double length = 0.0;
};

struct CoareaReport {
  double lhs = 0.0;
  double rhs = 0.0;
  double ratio = 0.0;  // lhs / rhs, 0 when rhs is 0
  bool pass = false;
  std::vector<CoareaShell> shells;
};

CoareaReport coarea_check(const MetricSurface& space, Vertex p, double R, double step,
                          double tolerance = 0.15);

struct QuadraticBound {
  double c = 0.0;
  bool pass = false;
  Vertex worst_point = -1;
  double worst_radius = 0.0;
};

QuadraticBound quadratic_lower_bound_check(const MetricSurface& space, const RegionSpec& region,
                                           const std::vector<double>& radii);

struct DimensionReport {
  double assouad = 0.0;
  double hausdorff = 0.0;
  int doubling = 1;
  std::vector<double> scales;
  std::vector<double> residuals;
  bool ordered(double tolerance) const { return hausdorff <= assouad + tolerance; }
};

}  // namespace geosurf
