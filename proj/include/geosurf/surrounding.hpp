#pragma once

#include <optional>
#include <string>
#include <vector>

#include "geosurf/metric_surface.hpp"

namespace geosurf {

struct SurResult {
  Vertex p = 0;
  double r = 0.0;
  double value = 0.0;
  Loop witness;
  std::optional<double> local_radius;
};

struct SurConstants {
  double K = 1.0;
  double C0 = 2.0;
  double C1 = 2.0;
  double C2 = 4.0;
};

/// C0 = 2/K^2, C1 = 2K^2, C2 = 4K^2.
SurConstants sur_constants(double K);
/// Constants from the cutting family of the region.
SurConstants sur_constants(const MetricSurface& space, const RegionSpec& region);

/// True iff no path in the plane from the target to the outer face avoids the
/// loop. Walks the radial graph of vertices and faces, crossing only edges
/// the loop does not traverse.
bool surrounds(const MetricSurface& space, const Loop& loop, std::span<const Vertex> target);

/// Vertices in the complementary component of the loop that contains p.
VertexSet enclosed_component(const MetricSurface& space, const Loop& loop, Vertex p);

/// Complementary components of a closed walk that do not reach the outer face.
std::vector<VertexSet> bounded_components(const MetricSurface& space, const Loop& loop);

/// Exact minimum-length closed walk avoiding ball(p,r) (inside ball(p,R)
/// when R is given) with odd crossing parity against a dual cut path from p
/// to the outer face. The witness is a simple cycle in canonical rotation.
SurResult sur(const MetricSurface& space, Vertex p, double r,
              std::optional<double> local_radius = std::nullopt);

struct SurQuasiInvariance {
  double L = 1.0;
  double sur_pr = 0.0;          // Sur_R(p, r)
  double sur_inner = 0.0;       // Sur_{LR}(p', r/L)
  double sur_outer = 0.0;       // Sur_{R/L}(p', L r)
  bool lhs_ok = false;          // (1/L) sur_inner <= sur_pr
  bool rhs_ok = false;          // sur_pr <= L sur_outer
  double lhs_ratio = 0.0;       // sur_pr / ((1/L) sur_inner)
  double rhs_ratio = 0.0;       // L sur_outer / sur_pr
};

SurQuasiInvariance sur_quasi_invariance(const MetricSurface& space, const BiLipMap& f, Vertex p,
                                           Vertex p_image, double r, double R);

struct SurScanRow {
  Vertex p = 0;
  double r = 0.0;
  double value = 0.0;
};

struct SurBoundScan {
  double k_emp = 0.0;
  bool pass = false;
  bool monotone = true;  // sur(p, .) non-decreasing along the radii
  std::optional<std::string> failure;
  std::vector<SurScanRow> rows;
};

/// k_emp = max over region points and radii of Sur(p,r)/r.
SurBoundScan sur_bound_scan(const MetricSurface& space, const RegionSpec& region,
                            const std::vector<double>& radii);

struct VariousSample {
  Vertex p = 0;
  double r = 0.0;
};

struct VariousRow {
  Vertex p = 0;
  double r = 0.0;
  double loop_length = 0.0;
  double diameter = 0.0;
  double local_radius = 0.0;       // r' = C0 r / 2
  double min_local_length = 0.0;   // min over loop vertices p' of length(loop ∩ B(p', r'))
  double loop_reach = 0.0;         // max distance from p to the loop
  double component_reach = 0.0;    // max distance from p to its enclosed component
  bool diameter_ok = false;
  bool length_ok = false;
  bool local_length_ok = false;
  bool loop_contained = false;
  bool component_contained = false;
  bool all() const {
    return diameter_ok && length_ok && local_length_ok && loop_contained && component_contained;
  }
};

/// Length of the loop's edges inside the closed ball B(center, radius),
/// measured along edges as segments of a metric graph.
double loop_length_in_ball(const MetricSurface& space, const Loop& loop, Vertex center,
                           double radius);

std::vector<VariousRow> various_bounds_check(const MetricSurface& space, const SurConstants& constants,
                                             const std::vector<VariousSample>& samples);

struct LayeredCover {
  std::vector<Vertex> centers;  // p first, then net points in admission order
  double cover_radius = 0.0;
  double loop_constant = 0.0;   // C = max loop length / r
  bool verified = false;
  std::vector<std::size_t> layer_sizes;
  std::vector<double> layer_bounds;  // loop length / separation + 1 per layer
};

LayeredCover layered_cover(const MetricSurface& space, Vertex p, double r, int k,
                           double net_separation, const SurConstants& constants = {});

struct ContractibilityRow {
  Vertex p = 0;
  double r = 0.0;
  double component_radius = 0.0;
  double ratio = 0.0;  // 0 when r = 0
};

struct Contractibility {
  double constant = 0.0;
  std::vector<ContractibilityRow> rows;
};

Contractibility contractibility_constant(const MetricSurface& space,
                                         const std::vector<VariousSample>& samples);

}  // namespace geosurf
