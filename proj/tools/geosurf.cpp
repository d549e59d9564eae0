#include <CLI11.hpp>
#include <fstream>
#include <iostream>
#include <sstream>

#include "geosurf/run.hpp"

using namespace geosurf;

namespace {

int exit_code_for(const Error& e) { return e.code() == Errc::ConfigInvalid ? 2 : 1; }

int finish(const RunConfig& config) {
  const RunResult result = run(config);
  for (const auto& o : result.outcomes) {
    std::cout << (o.pass ? "PASS " : "FAIL ") << o.name;
    if (!o.diagnostic.empty()) std::cout << ": " << o.diagnostic;
    std::cout << '\n';
  }
  if (result.exit_code == 2) return 2;
  if (!config.analyses.empty()) {
    for (const auto& f : report(config.out_dir)) std::cout << "wrote " << config.out_dir << '/' << f << '\n';
  }
  return result.exit_code;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Diagnostics for discretized geodesic surfaces"};
  app.require_subcommand(1);
  app.fallthrough();
  app.set_version_flag("--version", kVersion);

  RunConfig config;
  GenerateSpec gen;
  std::string space_path;
  auto* space_opt = app.add_option("--space", space_path, "Space file (generated from --family when absent)");
  auto* out_opt = app.add_option("--out", config.out_dir, "Output directory")->capture_default_str();
  auto* seed_opt = app.add_option("--seed", config.seed, "Seed for weights, sampling and net orders")->capture_default_str();
  auto* workers_opt = app.add_option("--workers", config.workers, "Worker threads, 0 for all cores")->capture_default_str();
  auto* tolerance_opt = app.add_option("--tolerance", config.tolerance, "Dimension ordering tolerance")->capture_default_str();
  app.add_option("--family", gen.family, "euclidean_grid, conformal_grid, hyperbolic_grid, tree, snowflake_grid")
      ->capture_default_str();
  app.add_option("--n", gen.n, "Grid side")->capture_default_str();
  app.add_option("--spacing", gen.spacing, "Edge length")->capture_default_str();
  app.add_option("--theta", gen.theta, "Snowflake exponent")->capture_default_str();
  app.add_option("--curvature-scale", gen.curvature_scale, "Hyperbolic grid scale")->capture_default_str();
  app.add_option("--factor-bound", gen.factor_bound, "Conformal factor bound")->capture_default_str();
  app.add_option("--branching", gen.branching, "Tree branching")->capture_default_str();
  app.add_option("--depth", gen.depth, "Tree depth")->capture_default_str();

  auto* generate = app.add_subcommand("generate", "Write a space file");

  auto* dimension = app.add_subcommand("analyze-dimension", "Assouad, Hausdorff and doubling estimates");
  dimension->add_option("--radii", config.dimension.radii, "Ball radii in mesh units");
  dimension->add_option("--epsilons", config.dimension.epsilons, "Net scales in mesh units");

  auto* sur = app.add_subcommand("analyze-sur", "Surrounding function scan");
  Vertex point = -1;
  double local_radius = 0.0;
  sur->add_option("--point", point, "Center vertex (origin by default)");
  sur->add_option("--radii", config.sur.radii, "Radii r");
  auto* local_opt = sur->add_option("--local-radius", local_radius, "Localization radius R");

  auto* hyper = app.add_subcommand("analyze-hyperbolicity", "Fat/thin dichotomy scan");
  hyper->add_option("--radii", config.hyperbolicity.radii, "Scan radii");
  hyper->add_option("--M", config.hyperbolicity.M, "Fatness divisor")->capture_default_str();
  hyper->add_option("--budget", config.hyperbolicity.budget, "Triangle budget")->capture_default_str();

  auto* measure = app.add_subcommand("build-measure", "Net-based Haar-like measure");
  measure->add_option("--epsilons", config.measures.epsilons, "Net scales, decreasing");
  measure->add_option("--seeds", config.measures.seeds, "Net order seeds");
  measure->add_option("--unit-radius", config.measures.unit_radius, "Unit ball radius")->capture_default_str();

  auto* poincare = app.add_subcommand("check-poincare", "Poincare dimension-bound diagnostic");
  std::vector<Vertex> sigma;
  poincare->add_option("--p", config.poincare.p, "Exponent p >= 1")->capture_default_str();
  poincare->add_option("--epsilons", config.poincare.epsilons, "Band widths in mesh units");
  poincare->add_option("--lambda", config.poincare.lambda, "Dilation of the test ball")->capture_default_str();
  poincare->add_option("--ball-radius", config.poincare.ball_radius, "Test ball radius in mesh units")
      ->capture_default_str();
  poincare->add_option("--sigma", sigma, "Endpoint ids of sigma")->expected(2);

  auto* suite = app.add_subcommand("suite", "Every analysis, or those of a config file");
  std::string config_path;
  suite->add_option("--config", config_path, "RunConfig JSON");

  auto* rep = app.add_subcommand("report", "Consolidate the artifacts in --out");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (rep->parsed()) {
      for (const auto& f : report(config.out_dir)) std::cout << "wrote " << config.out_dir << '/' << f << '\n';
      return 0;
    }
    if (suite->parsed() && !config_path.empty()) {
      std::ifstream in(config_path);
      if (!in) {
        std::cerr << "ConfigInvalid: cannot read " << config_path << '\n';
        return 2;
      }
      std::stringstream text;
      text << in.rdbuf();
      // Explicit command-line flags override the file.
      RunConfig file = config_from_json(text.str());
      if (out_opt->count()) file.out_dir = config.out_dir;
      if (seed_opt->count()) file.seed = config.seed;
      if (workers_opt->count()) file.workers = config.workers;
      if (tolerance_opt->count()) file.tolerance = config.tolerance;
      if (space_opt->count()) {
        file.space_path = space_path;
        file.generate.reset();
      }
      return finish(file);
    }
    if (space_path.empty()) {
      config.generate = gen;
    } else {
      config.space_path = space_path;
    }
    if (point >= 0) config.sur.point = point;
    if (local_opt->count()) config.sur.local_radius = local_radius;
    if (sigma.size() == 2) config.poincare.sigma = std::make_pair(sigma[0], sigma[1]);
    if (generate->parsed()) config.analyses = {};
    if (dimension->parsed()) config.analyses = {"dimension"};
    if (sur->parsed()) config.analyses = {"sur"};
    if (hyper->parsed()) config.analyses = {"hyperbolicity"};
    if (measure->parsed()) config.analyses = {"measures"};
    if (poincare->parsed()) config.analyses = {"poincare"};
    if (suite->parsed()) config.analyses = {"dimension", "sur", "hyperbolicity", "measures", "poincare"};
    const int code = finish(config);
    if (generate->parsed() && code == 0) std::cout << "wrote " << config.out_dir << "/space.json\n";
    return code;
  } catch (const Error& e) {
    std::cerr << e.what() << '\n';
    return exit_code_for(e);
  }
}
