#include "geosurf/poincare.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <queue>

#include "geosurf/parallel.hpp"
#include "geosurf/regression.hpp"

namespace geosurf {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

Vertex dart_head(const MetricSurface& space, int dart) {
  const EdgeSpec& e = space.edges()[dart / 2];
  return (dart & 1) ? e.u : e.v;
}

std::size_t region_index(const VertexSet& region, Vertex v) {
  const auto it = std::lower_bound(region.begin(), region.end(), v);
  require(it != region.end() && *it == v, Errc::BadParameters,
          "vertex " + std::to_string(v) + " lies outside the test region");
  return static_cast<std::size_t>(it - region.begin());
}

}  // namespace

double TestFunctionPack::u_at(Vertex v) const { return u[region_index(region, v)]; }

TestFunctionPack build_pack(const MetricSurface& space, const Geodesic& sigma, double epsilon,
                            const VertexSet& region) {
  require_geodesic(space, "build_pack");
  require(std::isfinite(epsilon) && epsilon > 0.0, Errc::BadEpsilon, "epsilon must be positive");
  require(!region.empty(), Errc::BadParameters, "test region is empty");
  require(sigma.waypoints.size() >= 3, Errc::SigmaDoesNotSeparate, "sigma needs an interior vertex");
  walk_length(space, sigma.waypoints, false);
  const Embedding& emb = space.embedding();
  const int n = space.vertex_count();
  std::vector<char> on_sigma(n, 0);
  for (Vertex v : sigma.waypoints) on_sigma[v] = 1;
  std::vector<char> in_region(n, 0);
  for (Vertex v : region) {
    space.check_vertex(v);
    in_region[v] = 1;
  }

  // Side of each neighbor at interior sigma vertices: +1 left, -1 right.
  std::vector<int> side_hint(n, 0);
  bool conflict = false;
  const auto& w = sigma.waypoints;
  for (std::size_t i = 1; i + 1 < w.size(); ++i) {
    const auto rot = emb.rotation(w[i]);
    const int k = static_cast<int>(rot.size());
    int fwd = -1;
    int back = -1;
    for (int j = 0; j < k; ++j) {
      if (dart_head(space, rot[j]) == w[i + 1]) fwd = j;
      if (dart_head(space, rot[j]) == w[i - 1]) back = j;
    }
    for (int j = (fwd + 1) % k; j != fwd; j = (j + 1) % k) {
      if (j == back) continue;
      const Vertex x = dart_head(space, rot[j]);
      if (on_sigma[x]) continue;
      const bool left = (j - fwd + k) % k < (back - fwd + k) % k;
      const int s = left ? 1 : -1;
      if (side_hint[x] != 0 && side_hint[x] != s) conflict = true;
      side_hint[x] = s;
    }
  }
  require(!conflict, Errc::SigmaDoesNotSeparate, "a vertex lies on both sides of sigma");

  TestFunctionPack pack;
  pack.sigma = sigma;
  pack.epsilon = epsilon;
  pack.region = region;
  std::vector<int> side(n, 0);
  std::vector<char> seen(n, 0);
  for (Vertex start : region) {
    if (on_sigma[start] || seen[start]) continue;
    std::vector<Vertex> component{start};
    seen[start] = 1;
    int label = 0;
    bool mixed = false;
    for (std::size_t q = 0; q < component.size(); ++q) {
      const Vertex v = component[q];
      if (side_hint[v] != 0) {
        mixed = mixed || (label != 0 && label != side_hint[v]);
        label = side_hint[v];
      }
      for (const Neighbor& nb : space.neighbors(v)) {
        if (in_region[nb.to] && !on_sigma[nb.to] && !seen[nb.to]) {
          seen[nb.to] = 1;
          component.push_back(nb.to);
        }
      }
    }
    require(!mixed, Errc::SigmaDoesNotSeparate, "sigma does not split the region into two sides");
    require(label != 0, Errc::SigmaDoesNotSeparate,
            "a part of the region is not adjacent to sigma (vertex " + std::to_string(start) + ")");
    for (Vertex v : component) side[v] = label;
  }
  for (Vertex v : region) {
    if (side[v] > 0) pack.side1.push_back(v);
    if (side[v] < 0) pack.side0.push_back(v);
  }
  require(!pack.side0.empty() && !pack.side1.empty(), Errc::SigmaDoesNotSeparate,
          "sigma leaves one side of the region empty");

  std::vector<Vertex> all(n);
  for (Vertex v = 0; v < n; ++v) all[v] = v;
  const VertexSet sources = make_vertex_set(sigma.waypoints);
  pack.distance = space.distance_to_set(sources, all);
  for (Vertex v : region) {
    const double delta = side[v] * pack.distance[v];
    pack.signed_distance.push_back(delta);
    pack.u.push_back(std::clamp((delta + epsilon) / (2.0 * epsilon), 0.0, 1.0));
  }
  return pack;
}

double rho_integral(const MetricSurface& space, const TestFunctionPack& pack, std::span<const Vertex> path) {
  double total = 0.0;
  for (std::size_t i = 0; i + 1 < path.size(); ++i) {
    const int e = space.edge_between(path[i], path[i + 1]);
    require(e >= 0, Errc::InvalidCurve, "path waypoints do not share an edge");
    total += space.edges()[e].length * (pack.rho(path[i]) + pack.rho(path[i + 1])) / 2.0;
  }
  return total;
}

bool upper_gradient_check(const MetricSurface& space, const TestFunctionPack& pack,
                          const std::vector<Geodesic>& paths) {
  for (const Geodesic& g : paths) {
    if (g.waypoints.empty()) continue;
    const double du = std::abs(pack.u_at(g.waypoints.front()) - pack.u_at(g.waypoints.back()));
    for (Vertex v : g.waypoints) region_index(pack.region, v);
    if (du > rho_integral(space, pack, g.waypoints) + kTolerance) return false;
  }
  return true;
}

UpperGradientSweep upper_gradient_sweep(const MetricSurface& space, const TestFunctionPack& pack) {
  const VertexSet& region = pack.region;
  require(region.size() <= 200, Errc::BadParameters, "exhaustive sweep supports at most 200 region vertices");
  const std::size_t k = region.size();
  std::vector<double> slack(k, kInf);
  parallel_for(k, [&](std::size_t s) {
    std::vector<double> cost(k, kInf);
    using Item = std::pair<double, std::size_t>;
    std::priority_queue<Item, std::vector<Item>, std::greater<>> heap;
    cost[s] = 0.0;
    heap.push({0.0, s});
    while (!heap.empty()) {
      const auto [c, i] = heap.top();
      heap.pop();
      if (c > cost[i]) continue;
      const Vertex v = region[i];
      for (const Neighbor& nb : space.neighbors(v)) {
        if (!set_contains(region, nb.to)) continue;
        const std::size_t j = region_index(region, nb.to);
        const double nc = c + nb.length * (pack.rho(v) + pack.rho(nb.to)) / 2.0;
        if (nc < cost[j]) {
          cost[j] = nc;
          heap.push({nc, j});
        }
      }
    }
    for (std::size_t j = 0; j < k; ++j) {
      if (j == s || cost[j] == kInf) continue;
      slack[s] = std::min(slack[s], cost[j] - std::abs(pack.u[s] - pack.u[j]));
    }
  });
  UpperGradientSweep out;
  out.pairs = k * (k - 1);
  out.worst_slack = *std::min_element(slack.begin(), slack.end());
  out.pass = out.worst_slack >= -kTolerance;
  return out;
}

double mean_oscillation(const AtomicMeasure& measure, const VertexSet& set, const std::vector<double>& values) {
  require(values.size() == set.size(), Errc::BadParameters, "values must align with the set");
  double mass = 0.0;
  double weighted = 0.0;
  std::vector<double> w(set.size());
  for (std::size_t i = 0; i < set.size(); ++i) {
    w[i] = to_double(measure.weight(set[i]));
    mass += w[i];
    weighted += w[i] * values[i];
  }
  require(mass > 0.0, Errc::ZeroMeasureOnBall, "the measure vanishes on the set");
  const double mean = weighted / mass;
  double total = 0.0;
  for (std::size_t i = 0; i < set.size(); ++i) total += w[i] * std::abs(values[i] - mean);
  return total / mass;
}

PoincareRatio poincare_ratio(const MetricSurface& space, const AtomicMeasure& measure, const VertexSet& ball_b,
                             const VertexSet& lambda_ball, double p_exp, const TestFunctionPack& pack) {
  require(p_exp >= 1.0, Errc::BadParameters, "p must be at least 1");
  require(!ball_b.empty() && !lambda_ball.empty(), Errc::BadParameters, "balls must be nonempty");
  std::vector<double> values;
  for (Vertex v : ball_b) values.push_back(pack.u_at(v));
  PoincareRatio out;
  out.lhs = mean_oscillation(measure, ball_b, values);
  const double lambda_mass = measure.measure_of_double(lambda_ball);
  require(lambda_mass > 0.0, Errc::ZeroMeasureOnBall, "the measure vanishes on lambda B");
  double sum = 0.0;
  for (Vertex v : lambda_ball) sum += to_double(measure.weight(v)) * std::pow(pack.rho(v), p_exp);
  out.gradient = std::pow(sum / lambda_mass, 1.0 / p_exp);
  out.rhs = set_diameter(space, ball_b) * out.gradient;
  out.ratio = out.lhs == 0.0 ? 0.0 : (out.rhs > 0.0 ? out.lhs / out.rhs : kInf);
  return out;
}

double indicator_limit(const AtomicMeasure& measure, const TestFunctionPack& pack) {
  const double b = measure.measure_of_double(pack.region);
  require(b > 0.0, Errc::ZeroMeasureOnBall, "the measure vanishes on the region");
  return 2.0 * measure.measure_of_double(pack.side0) * measure.measure_of_double(pack.side1) / (b * b);
}

BandCover band_cover(const MetricSurface& space, const TestFunctionPack& pack) {
  const auto& w = pack.sigma.waypoints;
  std::vector<double> arc{0.0};
  for (std::size_t i = 0; i + 1 < w.size(); ++i) {
    arc.push_back(arc.back() + space.edges()[space.edge_between(w[i], w[i + 1])].length);
  }
  const double length = arc.back();
  const double eps = pack.epsilon;
  BandCover out;
  out.bound = length / (2.0 * eps) + 1.0;
  for (double t = eps; t - eps < length || out.centers.empty(); t += 2.0 * eps) {
    const double target = std::min(t, length);
    std::size_t best = 0;
    for (std::size_t i = 1; i < arc.size(); ++i) {
      if (std::abs(arc[i] - target) < std::abs(arc[best] - target)) best = i;
    }
    out.centers.push_back(w[best]);
  }
  std::vector<char> reached(space.vertex_count(), 0);
  for (const auto& [v, d] : space.reach(out.centers, 2.0 * eps)) reached[v] = 1;
  out.covered = true;
  for (Vertex v = 0; v < space.vertex_count(); ++v) {
    if (pack.rho(v) > 0.0 && !reached[v]) out.covered = false;
  }
  return out;
}

std::string to_string(PoincareVerdict verdict) {
  switch (verdict) {
    case PoincareVerdict::Consistent: return "CONSISTENT";
    case PoincareVerdict::ViolationSignal: return "VIOLATION-SIGNAL";
    case PoincareVerdict::Inconclusive: return "INCONCLUSIVE";
  }
  return "INCONCLUSIVE";
}

DimensionBoundReport dimension_bound_diagnostic(const MetricSurface& space, const AtomicMeasure& measure,
                                                double p_exp, const std::vector<double>& epsilons,
                                                const Geodesic& sigma, const VertexSet& ball_b,
                                                const VertexSet& lambda_ball, std::optional<double> alpha) {
  require_geodesic(space, "dimension_bound_diagnostic");
  require(p_exp >= 1.0, Errc::BadParameters, "p must be at least 1");
  require(epsilons.size() >= 3, Errc::InsufficientScales, "need at least 3 epsilons");
  std::vector<double> eps = epsilons;
  std::sort(eps.begin(), eps.end(), std::greater<>());
  require(eps.back() > 0.0, Errc::BadEpsilon, "epsilons must be positive");
  require(std::log2(eps.front() / eps.back()) >= 1.5 - kTolerance, Errc::InsufficientScales,
          "epsilons must span at least 1.5 octaves");
  DimensionBoundReport out;
  out.rows.resize(eps.size());
  parallel_for(eps.size(), [&](std::size_t i) {
    const TestFunctionPack pack = build_pack(space, sigma, eps[i], ball_b);
    PoincareScaleRow& row = out.rows[i];
    row.epsilon = eps[i];
    row.ratio = poincare_ratio(space, measure, ball_b, lambda_ball, p_exp, pack);
    row.limit = indicator_limit(measure, pack);
    const BandCover cover = band_cover(space, pack);
    row.band_balls = cover.centers.size();
    row.band_bound = cover.bound;
  });
  std::vector<double> x;
  std::vector<double> y;
  for (const auto& row : out.rows) {
    require(row.ratio.gradient > 0.0, Errc::AnalysisFailed, "the gradient term vanishes at some epsilon");
    x.push_back(std::log(row.epsilon));
    y.push_back(std::log(row.ratio.gradient));
  }
  out.slope = least_squares(x, y).slope;
  out.implied_alpha = 1.0 + p_exp + p_exp * out.slope;
  if (alpha) out.predicted_slope = (*alpha - 1.0 - p_exp) / p_exp;
  const double limit = out.rows.back().limit;
  const bool bounded_below = std::all_of(out.rows.begin(), out.rows.end(),
                                         [&](const PoincareScaleRow& r) { return r.ratio.lhs >= 0.5 * limit; });
  if (!bounded_below || limit <= 0.0) {
    out.verdict = PoincareVerdict::Inconclusive;
  } else {
    out.verdict = out.slope <= kSlopeTolerance ? PoincareVerdict::Consistent : PoincareVerdict::ViolationSignal;
  }
  return out;
}

}  // namespace geosurf
