#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "geosurf/metric_surface.hpp"

namespace geosurf {

inline constexpr const char* kVersion = "0.1.0";

struct GenerateSpec {
  std::string family = "euclidean_grid";
  int n = 33;
  double spacing = 1.0;
  double theta = 0.5;             // snowflake exponent
  double curvature_scale = 1.0;   // hyperbolic grid
  double factor_bound = 3.0;      // conformal factor range [1, bound]
  int branching = 2;
  int depth = 4;
};

/// Conformal factor table drawn uniformly from [1, bound] per grid point.
MetricSurface generate_space(const GenerateSpec& spec, std::uint64_t seed);

/// Radii and epsilons in units of the minimum edge length.
struct DimensionParams {
  std::vector<double> radii{8, 16};
  std::vector<double> epsilons{1, 2, 4, 8};
};

struct SurParams {
  std::optional<Vertex> point;  // origin when absent
  std::vector<double> radii{1, 2, 4};
  std::optional<double> local_radius;
};

struct HyperbolicityParams {
  std::vector<double> radii{4, 8, 16};
  double M = 10.0;
  std::size_t budget = 20000;
};

struct MeasureParams {
  std::vector<double> epsilons{4, 2, 1};
  std::vector<std::uint64_t> seeds{0, 1, 2};
  double unit_radius = 8.0;
};

struct PoincareParams {
  double p = 1.0;
  std::vector<double> epsilons{4, 2, 1};
  double lambda = 2.0;
  double ball_radius = 8.0;
  std::optional<std::pair<Vertex, Vertex>> sigma;  // middle column of a grid when absent
};

/// Analyses are "dimension", "sur", "hyperbolicity", "measures", "poincare";
/// an empty selection only materializes the space.
struct RunConfig {
  std::optional<GenerateSpec> generate;
  std::optional<std::string> space_path;
  std::vector<std::string> analyses;
  DimensionParams dimension;
  SurParams sur;
  HyperbolicityParams hyperbolicity;
  MeasureParams measures;
  PoincareParams poincare;
  std::uint64_t seed = 0;
  unsigned workers = 0;
  double tolerance = 0.3;
  std::string out_dir = "out";
};

std::string config_to_json(const RunConfig& config);
/// Throws ConfigInvalid on unknown fields, wrong types or malformed JSON.
RunConfig config_from_json(const std::string& text);
/// FNV-1a 64 of the canonical JSON without `workers` and `out_dir`, as 16
/// hex digits.
std::string config_hash(const RunConfig& config);
/// Throws ConfigInvalid on the first out-of-range parameter.
void validate_config(const RunConfig& config);

struct AnalysisOutcome {
  std::string name;
  bool pass = false;
  std::string diagnostic;  // error message or failed property
};

struct RunResult {
  int exit_code = 0;
  std::vector<AnalysisOutcome> outcomes;
  std::vector<std::string> artifacts;  // file names relative to out_dir
};

/// Validates, materializes the space into out_dir/space.json and writes one
/// JSON artifact per analysis plus summary.json. Exit 0 iff every selected
/// analysis passes, 1 on any failure, 2 on ConfigInvalid.
RunResult run(const RunConfig& config);

/// Consolidates the artifacts of `dir` into report.json and columnar plot
/// data (sur.csv, dichotomy.csv, dimension.csv, poincare.csv). Throws
/// MissingArtifacts when no analysis artifact is present.
std::vector<std::string> report(const std::string& dir);

}  // namespace geosurf
