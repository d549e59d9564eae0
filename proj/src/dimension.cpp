#include "geosurf/dimension.hpp"

#include <cmath>
#include <limits>

#include "geosurf/nets.hpp"
#include "geosurf/parallel.hpp"
#include "geosurf/regression.hpp"

namespace geosurf {

namespace {

struct ScalePoint {
  double ratio;
  double count;
  bool saturated;
};

ScalingFit fit_scaling(const std::vector<ScalePoint>& points) {
  std::vector<ScalePoint> kept;
  for (const auto& p : points) {
    if (!p.saturated) kept.push_back(p);
  }
  auto distinct = [](const std::vector<ScalePoint>& v) {
    std::vector<double> r;
    for (const auto& p : v) r.push_back(p.ratio);
    std::sort(r.begin(), r.end());
    return std::unique(r.begin(), r.end(), [](double a, double b) { return nearly_equal(a, b); }) -
           r.begin();
  };
  require(distinct(kept) >= 2, Errc::InsufficientSamples,
          "fewer than two unsaturated scales remain for the fit");
  auto fit_on = [](const std::vector<ScalePoint>& v) {
    std::vector<double> x;
    std::vector<double> y;
    for (const auto& p : v) {
      x.push_back(std::log(p.ratio));
      y.push_back(std::log(p.count));
    }
    return least_squares(x, y);
  };
  ScalingFit out;
  out.full_range_exponent = fit_on(kept).slope;
  double top = 0.0;
  for (const auto& p : kept) top = std::max(top, std::log2(p.ratio));
  std::vector<ScalePoint> window;
  for (const auto& p : kept) {
    if (std::log2(p.ratio) >= top - 1.0 - kTolerance) window.push_back(p);
  }
  if (distinct(window) < 2) window = kept;
  const LinearFit fit = fit_on(window);
  out.exponent = fit.slope;
  out.residuals = fit.residuals;
  out.used = window.size();
  const double envelope = *std::max_element(fit.residuals.begin(), fit.residuals.end());
  out.constant = std::exp(fit.intercept + envelope);
  return out;
}

double cover_sum(const MetricSurface& space, const VertexSet& region, double epsilon,
                 std::uint64_t seed) {
  const auto order = seeded_order(region, seed);
  const double count = static_cast<double>(maximal_net(space, epsilon, order).members.size());
  return count * 4.0 * epsilon * epsilon;
}

}  // namespace

int doubling_constant(const MetricSurface& space, const RegionSpec& region,
                      const std::vector<double>& scales) {
  require(!scales.empty(), Errc::BadParameters, "no scales given");
  for (double s : scales) {
    require(s > 0.0, Errc::BadParameters, "scales must be positive");
    require(2.0 * s <= region.radius * (1 + kTolerance), Errc::ScalesTooLarge,
            "scale " + std::to_string(s) + " exceeds half the region radius");
  }
  space.check_vertex(region.center);
  const VertexSet points = ball(space, region);
  std::vector<int> worst(points.size(), 1);
  parallel_for(points.size(), [&](std::size_t i) {
    for (double s : scales) worst[i] = std::max(worst[i], covering_number(space, points[i], 2 * s, s).greedy);
  });
  return *std::max_element(worst.begin(), worst.end());
}

std::vector<AssouadSample> assouad_grid(std::span<const Vertex> points, const std::vector<double>& radii,
                                        const std::vector<double>& deltas) {
  std::vector<AssouadSample> out;
  for (Vertex p : points)
    for (double r : radii)
      for (double d : deltas)
        if (d < r) out.push_back({p, r, d});
  return out;
}

AssouadEstimate assouad_estimate(const MetricSurface& space, const std::vector<AssouadSample>& samples) {
  require(samples.size() >= 8, Errc::InsufficientSamples, "Assouad fit needs at least 8 samples");
  double lo = std::numeric_limits<double>::infinity();
  double hi = 0.0;
  for (const auto& s : samples) {
    space.check_vertex(s.p);
    require(s.delta > 0.0 && s.delta < s.r, Errc::InsufficientSamples,
            "each sample needs 0 < delta < r");
    lo = std::min(lo, s.r / s.delta);
    hi = std::max(hi, s.r / s.delta);
  }
  require(hi >= 4.0 * lo * (1 - kTolerance), Errc::InsufficientSamples,
          "samples must span at least two octaves of delta/r");
  AssouadEstimate out;
  out.counts.resize(samples.size());
  parallel_for(samples.size(), [&](std::size_t i) {
    const auto& s = samples[i];
    const VertexSet b = ball(space, s.p, s.r);
    const auto order = seeded_order(b, 0);
    out.counts[i] = {s, maximal_net(space, s.delta, order).members.size(), b.size()};
  });
  std::vector<ScalePoint> points;
  for (const auto& c : out.counts) {
    points.push_back({c.sample.r / c.sample.delta, static_cast<double>(c.count), c.count == c.ball_size});
  }
  out.fit = fit_scaling(points);
  return out;
}

HausdorffEstimate hausdorff_dim_estimate(const MetricSurface& space, Vertex origin,
                                         const std::vector<double>& epsilons,
                                         const std::vector<std::uint64_t>& seeds,
                                         std::optional<double> unit_radius) {
  require(epsilons.size() >= 4, Errc::InsufficientScales, "Hausdorff fit needs at least 4 epsilons");
  require(!seeds.empty(), Errc::BadParameters, "no seeds given");
  const auto [lo, hi] = std::minmax_element(epsilons.begin(), epsilons.end());
  require(*lo > 0.0, Errc::BadEpsilon, "epsilons must be positive");
  require(*hi >= 4.0 * *lo * (1 - kTolerance), Errc::InsufficientScales,
          "epsilons must span at least two octaves");
  const VertexSet unit = ball(space, origin, unit_radius.value_or(4.0 * *hi));
  HausdorffEstimate out;
  std::vector<std::vector<std::size_t>> counts(seeds.size(), std::vector<std::size_t>(epsilons.size()));
  parallel_for(seeds.size() * epsilons.size(), [&](std::size_t i) {
    const std::size_t s = i / epsilons.size();
    const std::size_t e = i % epsilons.size();
    counts[s][e] = maximal_net(space, epsilons[e], seeded_order(unit, seeds[s])).members.size();
  });
  for (std::size_t s = 0; s < seeds.size(); ++s) {
    std::vector<ScalePoint> points;
    for (std::size_t e = 0; e < epsilons.size(); ++e) {
      points.push_back({1.0 / epsilons[e], static_cast<double>(counts[s][e]), counts[s][e] == unit.size()});
    }
    const ScalingFit fit = fit_scaling(points);
    if (s == 0) out.fit = fit;
    out.per_seed.push_back(fit.exponent);
  }
  out.alpha = out.per_seed.front();
  const auto [mn, mx] = std::minmax_element(out.per_seed.begin(), out.per_seed.end());
  out.spread = *mx - *mn;
  out.counts = counts.front();
  return out;
}

double hausdorff1_length(const MetricSurface& space, const Loop& loop) {
  return walk_length(space, loop.waypoints, true);
}

double hausdorff1_length(const MetricSurface& space, const Geodesic& path) {
  return walk_length(space, path.waypoints, false);
}

double inradius(const MetricSurface& space, const VertexSet& region) {
  std::vector<Vertex> outside;
  for (Vertex v = 0; v < space.vertex_count(); ++v) {
    if (!set_contains(region, v)) outside.push_back(v);
  }
  if (outside.empty()) return std::numeric_limits<double>::infinity();
  const auto d = space.distance_to_set(outside, region);
  return d.empty() ? 0.0 : *std::max_element(d.begin(), d.end());
}

double hausdorff2_estimate(const MetricSurface& space, const VertexSet& region, double epsilon,
                           std::uint64_t seed) {
  require(!region.empty(), Errc::BadParameters, "region is empty");
  require(epsilon > 0.0, Errc::BadEpsilon, "epsilon must be positive");
  require(epsilon <= inradius(space, region) / 2.0 * (1 + kTolerance), Errc::EpsilonTooLarge,
          "epsilon exceeds half the region inradius");
  return cover_sum(space, region, epsilon, seed);
}

CoareaReport coarea_check(const MetricSurface& space, Vertex p, double R, double step,
                          double tolerance) {
  require_geodesic(space, "coarea_check");
  space.check_vertex(p);
  require(R >= 0.0, Errc::NegativeRadius, "radius must be nonnegative");
  require(step > 0.0 && step <= space.mesh() * (1 + kTolerance), Errc::BadParameters,
          "step must lie in (0, mesh]");
  CoareaReport out;
  out.lhs = cover_sum(space, ball(space, p, R), space.mesh(), 0);
  const int shells = static_cast<int>(std::floor(R / step + kTolerance));
  out.shells.resize(shells);
  parallel_for(static_cast<std::size_t>(shells), [&](std::size_t k) {
    const double t = step * static_cast<double>(k + 1);
    out.shells[k] = {t, hausdorff1_length(space, exterior_boundary(space, ball(space, p, t)))};
  });
  double integral = 0.0;
  for (const auto& shell : out.shells) integral += shell.length * step;
  out.rhs = kCoareaConstant * integral;
  out.ratio = out.rhs > 0.0 ? out.lhs / out.rhs : 0.0;
  out.pass = out.lhs >= out.rhs * (1.0 - tolerance);
  return out;
}

QuadraticBound quadratic_lower_bound_check(const MetricSurface& space, const RegionSpec& region,
                                           const std::vector<double>& radii) {
  require(!radii.empty(), Errc::BadRadii, "no radii given");
  for (double r : radii) require(r > 0.0, Errc::BadRadii, "radii must be positive");
  const VertexSet points = ball(space, region);
  std::vector<QuadraticBound> local(points.size());
  parallel_for(points.size(), [&](std::size_t i) {
    QuadraticBound& q = local[i];
    q.c = std::numeric_limits<double>::infinity();
    for (double r : radii) {
      const double c = cover_sum(space, ball(space, points[i], r), space.mesh(), 0) / (r * r);
      if (c < q.c) q = {c, false, points[i], r};
    }
  });
  QuadraticBound out = local.front();
  for (const auto& q : local) {
    if (q.c < out.c) out = q;
  }
  out.pass = out.c > 0.0;
  return out;
}

}  // namespace geosurf
