#pragma once

#include <optional>
#include <string>
#include <vector>

#include "geosurf/measures.hpp"
#include "geosurf/metric_surface.hpp"

namespace geosurf {

/// u = clamp((delta + eps) / (2 eps), 0, 1) on the region, with delta the
/// signed distance to sigma (positive on the left side A1); rho = 1/(2 eps)
/// wherever the unsigned distance is at most eps.
struct TestFunctionPack {
  Geodesic sigma;
  double epsilon = 0.0;
  VertexSet region;
  std::vector<double> signed_distance;  // aligned with region
  std::vector<double> u;                // aligned with region
  std::vector<double> distance;         // unsigned, every vertex of the space
  VertexSet side0;                      // A0
  VertexSet side1;                      // A1

  double rho(Vertex v) const { return distance[v] <= epsilon * (1 + 1e-12) ? 1.0 / (2.0 * epsilon) : 0.0; }
  /// u at a region vertex; throws BadParameters outside the region.
  double u_at(Vertex v) const;
};

TestFunctionPack build_pack(const MetricSurface& space, const Geodesic& sigma, double epsilon,
                            const VertexSet& region);

/// Trapezoidal line integral of rho along a vertex path.
double rho_integral(const MetricSurface& space, const TestFunctionPack& pack, std::span<const Vertex> path);

/// |u(start) - u(end)| <= integral of rho for each path; paths must stay in
/// the region.
bool upper_gradient_check(const MetricSurface& space, const TestFunctionPack& pack,
                          const std::vector<Geodesic>& paths);

struct UpperGradientSweep {
  bool pass = true;
  std::size_t pairs = 0;
  double worst_slack = 0.0;  // min over pairs of (cheapest rho integral - |du|)
};

/// Every ordered vertex pair of the region against the cheapest rho integral
/// over all region paths joining them. Regions above 200 vertices are refused.
UpperGradientSweep upper_gradient_sweep(const MetricSurface& space, const TestFunctionPack& pack);

/// mu-average over `set` of |f - f_set|; values aligned with `set`.
double mean_oscillation(const AtomicMeasure& measure, const VertexSet& set, const std::vector<double>& values);

struct PoincareRatio {
  double lhs = 0.0;
  double gradient = 0.0;  // (average of rho^p over lambda B)^(1/p)
  double rhs = 0.0;       // diam(B) * gradient
  double ratio = 0.0;     // lhs / rhs
};

PoincareRatio poincare_ratio(const MetricSurface& space, const AtomicMeasure& measure, const VertexSet& ball_b,
                             const VertexSet& lambda_ball, double p_exp, const TestFunctionPack& pack);

/// 2 mu(A0) mu(A1) / mu(B)^2 for the pack's region.
double indicator_limit(const AtomicMeasure& measure, const TestFunctionPack& pack);

struct BandCover {
  std::vector<Vertex> centers;
  double bound = 0.0;  // length(sigma) / (2 eps) + 1
  bool covered = false;
};

/// Balls of radius 2 eps centered on sigma at arc lengths eps, 3 eps, ...
BandCover band_cover(const MetricSurface& space, const TestFunctionPack& pack);

enum class PoincareVerdict { Consistent, ViolationSignal, Inconclusive };
std::string to_string(PoincareVerdict verdict);

struct PoincareScaleRow {
  double epsilon = 0.0;
  PoincareRatio ratio;
  double limit = 0.0;
  std::size_t band_balls = 0;
  double band_bound = 0.0;
};

struct DimensionBoundReport {
  std::vector<PoincareScaleRow> rows;  // decreasing epsilon
  double slope = 0.0;                  // d log(gradient) / d log(eps)
  double implied_alpha = 0.0;          // 1 + p + p * slope
  std::optional<double> predicted_slope;
  PoincareVerdict verdict = PoincareVerdict::Inconclusive;
};

inline constexpr double kSlopeTolerance = 0.25;

/// Regresses the gradient term against eps. CONSISTENT when the lhs stays
/// bounded below and the slope is at most kSlopeTolerance.
DimensionBoundReport dimension_bound_diagnostic(const MetricSurface& space, const AtomicMeasure& measure,
                                                double p_exp, const std::vector<double>& epsilons,
                                                const Geodesic& sigma, const VertexSet& ball_b,
                                                const VertexSet& lambda_ball,
                                                std::optional<double> alpha = std::nullopt);

}  // namespace geosurf
