#include "geosurf/run.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <json.hpp>
#include <random>
#include <set>
#include <sstream>

#include "geosurf/dimension.hpp"
#include "geosurf/generators.hpp"
#include "geosurf/hyperbolicity.hpp"
#include "geosurf/measures.hpp"
#include "geosurf/nets.hpp"
#include "geosurf/parallel.hpp"
#include "geosurf/poincare.hpp"
#include "geosurf/space_io.hpp"
#include "geosurf/surrounding.hpp"

namespace geosurf {

namespace {

namespace fs = std::filesystem;
using nlohmann::json;
using nlohmann::ordered_json;

const std::vector<std::string> kAnalyses{"dimension", "sur", "hyperbolicity", "measures", "poincare"};
const std::vector<std::string> kFamilies{"euclidean_grid", "conformal_grid", "hyperbolic_grid", "tree",
                                         "snowflake_grid"};

[[noreturn]] void invalid(const std::string& what) { fail(Errc::ConfigInvalid, what); }

void check(bool ok, const std::string& what) {
  if (!ok) invalid(what);
}

ordered_json to_json(const GenerateSpec& g) {
  return {{"family", g.family},       {"n", g.n},
          {"spacing", g.spacing},     {"theta", g.theta},
          {"curvature_scale", g.curvature_scale}, {"factor_bound", g.factor_bound},
          {"branching", g.branching}, {"depth", g.depth}};
}

template <typename T>
ordered_json optional_json(const std::optional<T>& v) {
  return v ? ordered_json(*v) : ordered_json(nullptr);
}

ordered_json config_document(const RunConfig& c) {
  ordered_json doc;
  doc["generate"] = c.generate ? to_json(*c.generate) : ordered_json(nullptr);
  doc["space_path"] = optional_json(c.space_path);
  doc["analyses"] = c.analyses;
  doc["dimension"] = {{"radii", c.dimension.radii}, {"epsilons", c.dimension.epsilons}};
  doc["sur"] = {{"point", optional_json(c.sur.point)},
                {"radii", c.sur.radii},
                {"local_radius", optional_json(c.sur.local_radius)}};
  doc["hyperbolicity"] = {{"radii", c.hyperbolicity.radii}, {"M", c.hyperbolicity.M}, {"budget", c.hyperbolicity.budget}};
  doc["measures"] = {{"epsilons", c.measures.epsilons},
                     {"seeds", c.measures.seeds},
                     {"unit_radius", c.measures.unit_radius}};
  ordered_json sigma = nullptr;
  if (c.poincare.sigma) sigma = {c.poincare.sigma->first, c.poincare.sigma->second};
  doc["poincare"] = {{"p", c.poincare.p},
                     {"epsilons", c.poincare.epsilons},
                     {"lambda", c.poincare.lambda},
                     {"ball_radius", c.poincare.ball_radius},
                     {"sigma", sigma}};
  doc["seed"] = c.seed;
  doc["workers"] = c.workers;
  doc["tolerance"] = c.tolerance;
  doc["out_dir"] = c.out_dir;
  return doc;
}

void expect_keys(const json& obj, std::initializer_list<const char*> keys, const std::string& where) {
  check(obj.is_object(), where + " must be an object");
  for (const auto& [k, v] : obj.items()) {
    check(std::find_if(keys.begin(), keys.end(), [&](const char* name) { return k == name; }) != keys.end(),
          "unknown field '" + k + "' in " + where);
  }
}

template <typename T>
void read_field(const json& obj, const char* key, T& out) {
  if (obj.contains(key)) out = obj.at(key).get<T>();
}

template <typename T>
void read_optional(const json& obj, const char* key, std::optional<T>& out) {
  if (!obj.contains(key)) return;
  if (obj.at(key).is_null()) {
    out.reset();
  } else {
    out = obj.at(key).get<T>();
  }
}

std::string num(double v) {
  if (!std::isfinite(v)) return v > 0 ? "inf" : (v < 0 ? "-inf" : "nan");
  std::ostringstream s;
  s << std::setprecision(10) << v;
  return s.str();
}

ordered_json finite_or_null(double v) { return std::isfinite(v) ? ordered_json(v) : ordered_json(nullptr); }

void write_text(const fs::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  require(static_cast<bool>(out), Errc::IoError, "cannot write " + path.string());
  out << text;
}

void write_json(const fs::path& path, const ordered_json& doc) { write_text(path, doc.dump(2) + "\n"); }

ordered_json header(const RunConfig& config, const std::string& analysis) {
  return {{"analysis", analysis}, {"version", kVersion}, {"config_hash", config_hash(config)}};
}

MetricSurface materialize(const RunConfig& config) {
  try {
    if (config.space_path) return load_space(*config.space_path);
    return generate_space(*config.generate, config.seed);
  } catch (const Error& e) {
    invalid(std::string("space source: ") + e.what());
  }
}

struct Analysis {
  ordered_json doc;
  bool pass = false;
  std::string diagnostic;
};

Analysis run_dimension(const MetricSurface& space, const RunConfig& config) {
  const auto& prm = config.dimension;
  const Vertex o = space.origin();
  const double r_max = *std::max_element(prm.radii.begin(), prm.radii.end());
  std::vector<double> deltas;
  for (double e : prm.epsilons) deltas.push_back(e * space.min_edge());
  std::vector<double> radii;
  for (double r : prm.radii) radii.push_back(r * space.min_edge());
  const VertexSet centers = ball(space, o, space.min_edge());
  const auto est = assouad_estimate(space, assouad_grid(centers, radii, deltas));
  const auto haus = hausdorff_dim_estimate(space, o, deltas, {0, 1, 2}, r_max * space.min_edge());
  std::vector<double> scales;
  for (double d : deltas)
    if (2.0 * d <= r_max * space.min_edge() / 2.0 + kTolerance) scales.push_back(d);
  if (scales.empty()) scales.push_back(deltas.front());
  const int doubling = doubling_constant(space, {o, r_max * space.min_edge()}, scales);

  Analysis a;
  a.doc["assouad"] = {{"exponent", est.fit.exponent},
                      {"constant", est.fit.constant},
                      {"full_range_exponent", est.fit.full_range_exponent}};
  ordered_json rows = ordered_json::array();
  for (const auto& c : est.counts) {
    const double scale = c.sample.r / c.sample.delta;
    const double estimate = est.fit.constant * std::pow(scale, est.fit.exponent);
    rows.push_back({{"p", c.sample.p},
                    {"r", c.sample.r},
                    {"delta", c.sample.delta},
                    {"scale", scale},
                    {"count", c.count},
                    {"estimate", estimate},
                    {"residual", std::log(static_cast<double>(c.count) / estimate)}});
  }
  a.doc["assouad"]["samples"] = rows;
  a.doc["hausdorff"] = {{"alpha", haus.alpha}, {"spread", haus.spread}, {"per_seed", haus.per_seed},
                        {"epsilons", deltas}, {"counts", haus.counts}};
  a.doc["doubling"] = {{"constant", doubling}, {"scales", scales}};
  DimensionReport rep;
  rep.assouad = est.fit.exponent;
  rep.hausdorff = haus.alpha;
  a.pass = rep.ordered(config.tolerance);
  if (!a.pass) a.diagnostic = "hausdorff estimate exceeds assouad estimate beyond tolerance";
  if (space.geodesic() && space.has_embedding()) {
    std::vector<double> qr;
    for (double r : radii)
      if (r <= r_max * space.min_edge() / 2.0 + kTolerance) qr.push_back(r);
    if (qr.empty()) qr.push_back(radii.front());
    const auto quad = quadratic_lower_bound_check(space, {o, r_max * space.min_edge()}, qr);
    const auto coarea = coarea_check(space, o, radii.front(), space.min_edge());
    a.doc["quadratic"] = {{"c", quad.c}, {"radii", qr}, {"worst_point", quad.worst_point},
                          {"worst_radius", quad.worst_radius}};
    a.doc["coarea"] = {{"R", radii.front()}, {"lhs", coarea.lhs}, {"rhs", coarea.rhs},
                       {"ratio", coarea.ratio}, {"pass", coarea.pass}};
    if (quad.c < 0.5) {
      a.pass = false;
      a.diagnostic = "quadratic lower bound constant below 0.5";
    }
    if (!coarea.pass) {
      a.pass = false;
      a.diagnostic = "coarea inequality fails";
    }
  }
  return a;
}

Analysis run_sur(const MetricSurface& space, const RunConfig& config) {
  const auto& prm = config.sur;
  const Vertex p = prm.point.value_or(space.origin());
  std::vector<SurResult> results(prm.radii.size());
  parallel_for(prm.radii.size(), [&](std::size_t i) {
    results[i] = sur(space, p, prm.radii[i], prm.local_radius);
  });
  Analysis a;
  ordered_json rows = ordered_json::array();
  a.pass = true;
  for (std::size_t i = 0; i < results.size(); ++i) {
    const auto& s = results[i];
    std::ostringstream loop;
    write_loop_json(loop, space, s.witness);
    rows.push_back({{"p", s.p},
                    {"r", s.r},
                    {"sur", s.value},
                    {"sur_over_r", s.r > 0 ? ordered_json(s.value / s.r) : ordered_json(nullptr)},
                    {"witness", ordered_json::parse(loop.str())}});
    for (std::size_t j = 0; j < i; ++j) {
      if (prm.radii[j] <= prm.radii[i] && results[j].value > s.value * (1 + kTolerance)) {
        a.pass = false;
        a.diagnostic = "Sur is not monotone in r";
      }
    }
  }
  a.doc["local_radius"] = optional_json(prm.local_radius);
  a.doc["rows"] = rows;
  return a;
}

Analysis run_hyperbolicity(const MetricSurface& space, const RunConfig& config) {
  const auto& prm = config.hyperbolicity;
  const auto rows = dichotomy_scan(space, space.origin(), prm.radii, prm.M, prm.budget, config.seed);
  Analysis a;
  a.pass = true;
  ordered_json out = ordered_json::array();
  for (const auto& row : rows) {
    ordered_json entry{{"r", row.r},
                       {"classification", to_string(row.classification)},
                       {"certificate", row.scan.certificate},
                       {"examined", row.scan.examined},
                       {"max_delta", row.scan.max_delta},
                       {"delta_ratio", row.delta_ratio},
                       {"witness", nullptr},
                       {"surrounded_ball", nullptr}};
    if (row.scan.triangle) {
      const Triangle& t = *row.scan.triangle;
      entry["witness"] = {{"corners", t.corners}, {"delta", t.delta}};
      if (space.has_embedding() && space.mesh() <= t.delta / 20.0 + kTolerance) {
        try {
          const auto b = surrounded_ball_from_fat_triangle(space, t, t.delta);
          entry["surrounded_ball"] = {{"center", b.center}, {"radius", b.radius}, {"surrounded", b.surrounded}};
          if (!b.surrounded) {
            a.pass = false;
            a.diagnostic = "enclosed ball at r = " + num(row.r) + " is not surrounded";
          }
        } catch (const Error& e) {
          a.pass = false;
          a.diagnostic = e.what();
          entry["surrounded_ball"] = {{"error", e.what()}};
        }
      }
    }
    out.push_back(std::move(entry));
  }
  a.doc["M"] = prm.M;
  a.doc["budget"] = prm.budget;
  a.doc["seed"] = config.seed;
  a.doc["rows"] = out;
  return a;
}

Analysis run_measures(const MetricSurface& space, const RunConfig& config, const fs::path& dir) {
  const auto& prm = config.measures;
  const RegionSpec unit{space.origin(), prm.unit_radius};
  const auto haar = haar_like(space, prm.epsilons, prm.seeds, unit);
  Analysis a;
  ordered_json drift = ordered_json::array();
  for (const auto& d : haar.drift) {
    drift.push_back({{"epsilon_coarse", d.epsilon_coarse},
                     {"epsilon_fine", d.epsilon_fine},
                     {"max_ratio", d.max_ratio},
                     {"per_octave", d.per_octave}});
  }
  double alpha = 1.0;
  for (std::size_t i = 0; i < haar.per_seed.size(); ++i)
    for (std::size_t j = i + 1; j < haar.per_seed.size(); ++j)
      alpha = std::max(alpha, quasi_equivalence(haar.per_seed[i], haar.per_seed[j]).alpha);
  a.doc["epsilons"] = haar.epsilons;
  a.doc["seeds"] = haar.seeds;
  a.doc["unit_radius"] = prm.unit_radius;
  a.doc["test_radius"] = haar.test_radius;
  a.doc["normalizers"] = haar.normalizers;
  a.doc["drift"] = drift;
  a.doc["seed_alpha"] = finite_or_null(alpha);
  a.doc["converged"] = haar.converged;
  a.doc["measure_file"] = "measure.json";
  std::ofstream out(dir / "measure.json", std::ios::binary);
  require(static_cast<bool>(out), Errc::IoError, "cannot write measure.json");
  write_measure_json(out, haar.measure);
  a.pass = haar.converged;
  if (!a.pass) a.diagnostic = "net measures drift beyond tolerance";
  return a;
}

Analysis run_poincare(const MetricSurface& space, const RunConfig& config) {
  const auto& prm = config.poincare;
  Vertex s0 = 0;
  Vertex s1 = 0;
  if (prm.sigma) {
    std::tie(s0, s1) = *prm.sigma;
  } else {
    require(space.grid().has_value(), Errc::AnalysisFailed, "sigma is required off grid families");
    const int c = space.grid()->cols / 2;
    s0 = grid_vertex(space, c, 0);
    s1 = grid_vertex(space, c, space.grid()->rows - 1);
  }
  const Geodesic sigma = geodesic(space, s0, s1);
  const Vertex o = space.origin();
  const double radius = prm.ball_radius * space.min_edge();
  const VertexSet b = ball(space, o, radius);
  const VertexSet lb = ball(space, o, prm.lambda * radius);
  const auto mu = uniform_measure(space, ball(space, o, space.min_edge()));
  std::vector<double> eps;
  for (double e : prm.epsilons) eps.push_back(e * space.min_edge());
  const auto rep = dimension_bound_diagnostic(space, mu, prm.p, eps, sigma, b, lb);
  Analysis a;
  ordered_json rows = ordered_json::array();
  for (const auto& r : rep.rows) {
    rows.push_back({{"epsilon", r.epsilon},
                    {"lhs", r.ratio.lhs},
                    {"gradient", r.ratio.gradient},
                    {"rhs", r.ratio.rhs},
                    {"ratio", finite_or_null(r.ratio.ratio)},
                    {"limit", r.limit},
                    {"band_balls", r.band_balls},
                    {"band_bound", r.band_bound}});
  }
  a.doc["sigma"] = {s0, s1};
  a.doc["p"] = prm.p;
  a.doc["lambda"] = prm.lambda;
  a.doc["ball_radius"] = radius;
  a.doc["rows"] = rows;
  a.doc["slope"] = rep.slope;
  a.doc["implied_alpha"] = rep.implied_alpha;
  a.doc["verdict"] = to_string(rep.verdict);
  const auto& finest = rep.rows.back();
  const bool near_limit = std::abs(finest.ratio.lhs - finest.limit) <= 0.2 * finest.limit;
  a.doc["lhs_within_20_percent"] = near_limit;
  a.pass = rep.verdict == PoincareVerdict::Consistent && near_limit;
  if (b.size() <= 200) {
    const auto sweep = upper_gradient_sweep(space, build_pack(space, sigma, eps.back(), b));
    a.doc["upper_gradient"] = {{"pass", sweep.pass}, {"pairs", sweep.pairs}, {"worst_slack", sweep.worst_slack}};
    if (!sweep.pass) a.diagnostic = "upper gradient check fails";
    a.pass = a.pass && sweep.pass;
  } else {
    a.doc["upper_gradient"] = nullptr;
  }
  if (!a.pass && a.diagnostic.empty()) {
    a.diagnostic = "verdict " + to_string(rep.verdict) + (near_limit ? "" : ", lhs not within 20% of the limit");
  }
  return a;
}

std::optional<json> load_artifact(const fs::path& path) {
  std::ifstream in(path);
  if (!in) return std::nullopt;
  try {
    json doc;
    in >> doc;
    return doc;
  } catch (const json::exception& e) {
    fail(Errc::IoError, "malformed artifact " + path.string() + ": " + e.what());
  }
}

std::string cell(const json& v) {
  if (v.is_null()) return "";
  if (v.is_number_float()) return num(v.get<double>());
  if (v.is_string()) return v.get<std::string>();
  return v.dump();
}

}  // namespace

MetricSurface generate_space(const GenerateSpec& spec, std::uint64_t seed) {
  const std::string& f = spec.family;
  if (f == "euclidean_grid") return euclidean_grid(spec.n, spec.spacing);
  if (f == "conformal_grid") {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> pick(1.0, spec.factor_bound);
    std::vector<double> table(static_cast<std::size_t>(spec.n) * spec.n);
    for (double& v : table) v = pick(rng);
    const int n = spec.n;
    return conformal_grid(n, spec.spacing, [&table, n](int x, int y) { return table[y * n + x]; },
                          spec.factor_bound);
  }
  if (f == "hyperbolic_grid") return hyperbolic_grid(spec.n, spec.curvature_scale);
  if (f == "tree") return tree(spec.branching, spec.depth, spec.spacing);
  if (f == "snowflake_grid") return snowflake_grid(spec.n, spec.spacing, spec.theta);
  fail(Errc::UnsupportedFamily, "unknown family '" + f + "'");
}

std::string config_to_json(const RunConfig& config) { return config_document(config).dump(2); }

RunConfig config_from_json(const std::string& text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::exception& e) {
    invalid(std::string("malformed config: ") + e.what());
  }
  RunConfig c;
  try {
    expect_keys(doc, {"generate", "space_path", "analyses", "dimension", "sur", "hyperbolicity", "measures",
                      "poincare", "seed", "workers", "tolerance", "out_dir"},
                "config");
    if (doc.contains("generate") && !doc["generate"].is_null()) {
      const auto& g = doc["generate"];
      expect_keys(g, {"family", "n", "spacing", "theta", "curvature_scale", "factor_bound", "branching", "depth"},
                  "generate");
      GenerateSpec spec;
      read_field(g, "family", spec.family);
      read_field(g, "n", spec.n);
      read_field(g, "spacing", spec.spacing);
      read_field(g, "theta", spec.theta);
      read_field(g, "curvature_scale", spec.curvature_scale);
      read_field(g, "factor_bound", spec.factor_bound);
      read_field(g, "branching", spec.branching);
      read_field(g, "depth", spec.depth);
      c.generate = spec;
    }
    read_optional(doc, "space_path", c.space_path);
    read_field(doc, "analyses", c.analyses);
    if (doc.contains("dimension")) {
      const auto& d = doc["dimension"];
      expect_keys(d, {"radii", "epsilons"}, "dimension");
      read_field(d, "radii", c.dimension.radii);
      read_field(d, "epsilons", c.dimension.epsilons);
    }
    if (doc.contains("sur")) {
      const auto& s = doc["sur"];
      expect_keys(s, {"point", "radii", "local_radius"}, "sur");
      read_optional(s, "point", c.sur.point);
      read_field(s, "radii", c.sur.radii);
      read_optional(s, "local_radius", c.sur.local_radius);
    }
    if (doc.contains("hyperbolicity")) {
      const auto& h = doc["hyperbolicity"];
      expect_keys(h, {"radii", "M", "budget"}, "hyperbolicity");
      read_field(h, "radii", c.hyperbolicity.radii);
      read_field(h, "M", c.hyperbolicity.M);
      read_field(h, "budget", c.hyperbolicity.budget);
    }
    if (doc.contains("measures")) {
      const auto& m = doc["measures"];
      expect_keys(m, {"epsilons", "seeds", "unit_radius"}, "measures");
      read_field(m, "epsilons", c.measures.epsilons);
      read_field(m, "seeds", c.measures.seeds);
      read_field(m, "unit_radius", c.measures.unit_radius);
    }
    if (doc.contains("poincare")) {
      const auto& p = doc["poincare"];
      expect_keys(p, {"p", "epsilons", "lambda", "ball_radius", "sigma"}, "poincare");
      read_field(p, "p", c.poincare.p);
      read_field(p, "epsilons", c.poincare.epsilons);
      read_field(p, "lambda", c.poincare.lambda);
      read_field(p, "ball_radius", c.poincare.ball_radius);
      if (p.contains("sigma") && !p["sigma"].is_null()) {
        const auto ends = p["sigma"].get<std::vector<Vertex>>();
        check(ends.size() == 2, "poincare.sigma needs two endpoint ids");
        c.poincare.sigma = std::make_pair(ends[0], ends[1]);
      }
    }
    read_field(doc, "seed", c.seed);
    read_field(doc, "workers", c.workers);
    read_field(doc, "tolerance", c.tolerance);
    read_field(doc, "out_dir", c.out_dir);
  } catch (const json::exception& e) {
    invalid(std::string("config field error: ") + e.what());
  }
  return c;
}

std::string config_hash(const RunConfig& config) {
  ordered_json doc = config_document(config);
  doc.erase("workers");
  doc.erase("out_dir");
  std::uint64_t h = 14695981039346656037ull;
  for (unsigned char ch : doc.dump()) {
    h ^= ch;
    h *= 1099511628211ull;
  }
  std::ostringstream s;
  s << std::hex << std::setw(16) << std::setfill('0') << h;
  return s.str();
}

void validate_config(const RunConfig& c) {
  check(c.generate.has_value() != c.space_path.has_value(), "exactly one space source (generate or space_path)");
  if (c.generate) {
    const auto& g = *c.generate;
    check(std::find(kFamilies.begin(), kFamilies.end(), g.family) != kFamilies.end(),
          "unknown family '" + g.family + "'");
    check(g.n >= 3, "n must be at least 3");
    check(g.spacing > 0, "spacing must be positive");
    check(g.theta > 0 && g.theta < 1, "theta must lie in (0,1)");
    check(g.curvature_scale > 0, "curvature_scale must be positive");
    check(g.factor_bound >= 1, "factor_bound must be at least 1");
    check(g.branching >= 2, "branching must be at least 2");
    check(g.depth >= 1, "depth must be at least 1");
  }
  std::set<std::string> seen;
  for (const auto& name : c.analyses) {
    check(std::find(kAnalyses.begin(), kAnalyses.end(), name) != kAnalyses.end(),
          "unknown analysis '" + name + "'");
    check(seen.insert(name).second, "analysis '" + name + "' selected twice");
  }
  auto positive = [](const std::vector<double>& v, const std::string& what) {
    check(!v.empty(), what + " must not be empty");
    for (double x : v) check(std::isfinite(x) && x > 0, what + " must be positive");
  };
  positive(c.dimension.radii, "dimension.radii");
  positive(c.dimension.epsilons, "dimension.epsilons");
  check(!c.sur.radii.empty(), "sur.radii must not be empty");
  for (double r : c.sur.radii) check(std::isfinite(r) && r >= 0, "sur.radii must be nonnegative");
  if (c.sur.local_radius) check(*c.sur.local_radius > 0, "sur.local_radius must be positive");
  positive(c.hyperbolicity.radii, "hyperbolicity.radii");
  check(c.hyperbolicity.M > 1, "hyperbolicity.M must exceed 1");
  check(c.hyperbolicity.budget > 0, "hyperbolicity.budget must be positive");
  positive(c.measures.epsilons, "measures.epsilons");
  check(!c.measures.seeds.empty(), "measures.seeds must not be empty");
  check(c.measures.unit_radius > 0, "measures.unit_radius must be positive");
  check(c.poincare.p >= 1, "poincare.p must be at least 1");
  positive(c.poincare.epsilons, "poincare.epsilons");
  check(c.poincare.lambda >= 1, "poincare.lambda must be at least 1");
  check(c.poincare.ball_radius > 0, "poincare.ball_radius must be positive");
  check(c.tolerance >= 0, "tolerance must be nonnegative");
  check(!c.out_dir.empty(), "out_dir must not be empty");
}

RunResult run(const RunConfig& config) {
  RunResult result;
  MetricSurface space;
  try {
    validate_config(config);
    space = materialize(config);
    if (config.sur.point) check(space.contains(*config.sur.point), "sur.point is not a vertex");
    if (config.poincare.sigma) {
      check(space.contains(config.poincare.sigma->first) && space.contains(config.poincare.sigma->second),
            "poincare.sigma endpoints are not vertices");
    }
  } catch (const Error& e) {
    result.exit_code = 2;
    result.outcomes.push_back({"config", false, e.what()});
    return result;
  }
  set_worker_count(config.workers);
  const fs::path dir(config.out_dir);
  fs::create_directories(dir);
  save_space((dir / "space.json").string(), space);
  result.artifacts.push_back("space.json");

  ordered_json summary = header(config, "summary");
  summary["config"] = config_document(config);
  summary["space"] = {{"file", "space.json"},
                      {"family", to_string(space.family())},
                      {"vertices", space.vertex_count()},
                      {"edges", space.edge_count()},
                      {"geodesic", space.geodesic()}};
  ordered_json analyses = ordered_json::array();
  for (const auto& name : kAnalyses) {
    if (std::find(config.analyses.begin(), config.analyses.end(), name) == config.analyses.end()) continue;
    Analysis a;
    try {
      if (name == "dimension") a = run_dimension(space, config);
      if (name == "sur") a = run_sur(space, config);
      if (name == "hyperbolicity") a = run_hyperbolicity(space, config);
      if (name == "measures") a = run_measures(space, config, dir);
      if (name == "poincare") a = run_poincare(space, config);
    } catch (const Error& e) {
      a.pass = false;
      a.diagnostic = e.what();
      a.doc = ordered_json::object();
      a.doc["error"] = e.what();
    }
    ordered_json doc = header(config, name);
    doc["pass"] = a.pass;
    doc["diagnostic"] = a.diagnostic;
    doc.update(a.doc);
    const std::string file = name + ".json";
    write_json(dir / file, doc);
    result.artifacts.push_back(file);
    if (name == "measures" && a.pass) result.artifacts.push_back("measure.json");
    result.outcomes.push_back({name, a.pass, a.diagnostic});
    analyses.push_back({{"name", name}, {"pass", a.pass}, {"diagnostic", a.diagnostic}, {"artifact", file}});
    if (!a.pass) result.exit_code = 1;
  }
  summary["analyses"] = analyses;
  summary["exit_code"] = result.exit_code;
  write_json(dir / "summary.json", summary);
  result.artifacts.push_back("summary.json");
  return result;
}

std::vector<std::string> report(const std::string& dir_name) {
  const fs::path dir(dir_name);
  std::map<std::string, json> docs;
  for (const auto& name : kAnalyses) {
    if (auto doc = load_artifact(dir / (name + ".json"))) docs[name] = std::move(*doc);
  }
  require(!docs.empty(), Errc::MissingArtifacts, "no analysis artifacts in " + dir_name);
  const auto summary = load_artifact(dir / "summary.json");

  std::vector<std::string> written;
  ordered_json rep{{"version", kVersion},
                   {"config_hash", summary ? (*summary)["config_hash"] : json(nullptr)}};
  ordered_json list = ordered_json::array();
  bool all = true;
  for (const auto& name : kAnalyses) {
    if (!docs.count(name)) continue;
    const json& d = docs[name];
    const bool pass = d.value("pass", false);
    all = all && pass;
    ordered_json entry{{"name", name}, {"pass", pass}, {"diagnostic", d.value("diagnostic", "")}};
    if (name == "dimension" && d.contains("assouad")) {
      entry["assouad"] = d["assouad"]["exponent"];
      entry["hausdorff"] = d["hausdorff"]["alpha"];
      entry["doubling"] = d["doubling"]["constant"];
    }
    if (name == "hyperbolicity" && d.contains("rows")) {
      ordered_json scales = ordered_json::array();
      for (const auto& r : d["rows"]) {
        scales.push_back({{"r", r["r"]}, {"classification", r["classification"]}, {"certificate", r["certificate"]}});
      }
      entry["scales"] = scales;
    }
    if (name == "poincare" && d.contains("verdict")) {
      entry["verdict"] = d["verdict"];
      entry["implied_alpha"] = d["implied_alpha"];
    }
    if (name == "measures" && d.contains("converged")) entry["seed_alpha"] = d["seed_alpha"];
    list.push_back(std::move(entry));
  }
  rep["analyses"] = list;
  rep["all_pass"] = all;
  write_json(dir / "report.json", rep);
  written.push_back("report.json");

  auto table = [&](const std::string& file, const std::string& head, const json& rows,
                   const std::vector<std::string>& keys) {
    std::string text = head + "\n";
    for (const auto& r : rows) {
      for (std::size_t i = 0; i < keys.size(); ++i) text += (i ? "," : "") + cell(r[keys[i]]);
      text += "\n";
    }
    write_text(dir / file, text);
    written.push_back(file);
  };
  if (docs.count("sur") && docs["sur"].contains("rows")) {
    table("sur.csv", "p,r,Sur,Sur/r", docs["sur"]["rows"], {"p", "r", "sur", "sur_over_r"});
  }
  if (docs.count("hyperbolicity") && docs["hyperbolicity"].contains("rows")) {
    table("dichotomy.csv", "r,classification,certificate,delta_ratio", docs["hyperbolicity"]["rows"],
          {"r", "classification", "certificate", "delta_ratio"});
  }
  if (docs.count("dimension") && docs["dimension"].contains("assouad")) {
    table("dimension.csv", "scale,count,estimate,residual", docs["dimension"]["assouad"]["samples"],
          {"scale", "count", "estimate", "residual"});
  }
  if (docs.count("poincare") && docs["poincare"].contains("rows")) {
    table("poincare.csv", "epsilon,lhs,rhs,ratio,limit", docs["poincare"]["rows"],
          {"epsilon", "lhs", "rhs", "ratio", "limit"});
  }
  if (docs.count("measures") && docs["measures"].contains("normalizers")) {
    const json& m = docs["measures"];
    std::string text = "epsilon,seed,cardinality,region_id\n";
    for (std::size_t s = 0; s < m["seeds"].size(); ++s) {
      for (std::size_t e = 0; e < m["epsilons"].size(); ++e) {
        text += cell(m["epsilons"][e]) + "," + cell(m["seeds"][s]) + "," + cell(m["normalizers"][s][e]) +
                ",unit_ball\n";
      }
    }
    write_text(dir / "nets.csv", text);
    written.push_back("nets.csv");
  }
  return written;
}

}  // namespace geosurf
