#include "geosurf/measures.hpp"

#include <cmath>
#include <istream>
#include <json.hpp>
#include <ostream>
#include <sstream>

#include "geosurf/parallel.hpp"
#include "geosurf/regression.hpp"

namespace geosurf {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

double ratio_of(double a, double b) {
  if (a == 0.0 && b == 0.0) return 1.0;
  if (a == 0.0 || b == 0.0) return kInf;
  return std::max(a / b, b / a);
}

std::size_t count_in(const VertexSet& set, std::span<const Vertex> members) {
  std::size_t n = 0;
  for (Vertex v : members) n += set_contains(set, v) ? 1 : 0;
  return n;
}

}  // namespace

AtomicMeasure::AtomicMeasure(const std::map<Vertex, Weight>& weights) {
  for (const auto& [v, w] : weights) {
    require(w >= 0, Errc::BadParameters, "negative weight at vertex " + std::to_string(v));
    if (w > 0) {
      atoms_.emplace(v, w);
      mass_ += w;
    }
  }
  require(mass_ > 0, Errc::ZeroMeasure, "measure has no positive atom");
}

Weight AtomicMeasure::weight(Vertex v) const {
  auto it = atoms_.find(v);
  return it == atoms_.end() ? Weight(0) : it->second;
}

Weight AtomicMeasure::measure_of(std::span<const Vertex> set) const {
  Weight total(0);
  for (Vertex v : set) total += weight(v);
  return total;
}

VertexSet AtomicMeasure::support() const {
  VertexSet out;
  for (const auto& [v, w] : atoms_) out.push_back(v);
  return out;
}

AtomicMeasure AtomicMeasure::scaled(const Weight& factor) const {
  std::map<Vertex, Weight> out;
  for (const auto& [v, w] : atoms_) out.emplace(v, w * factor);
  return AtomicMeasure(out);
}

AtomicMeasure counting_measure(std::span<const Vertex> vertices) {
  std::map<Vertex, Weight> atoms;
  for (Vertex v : vertices) atoms[v] = 1;
  return AtomicMeasure(atoms);
}

AtomicMeasure uniform_measure(const MetricSurface& space, const VertexSet& unit_ball) {
  require(!unit_ball.empty(), Errc::EmptyNormalizer, "unit ball is empty");
  std::map<Vertex, Weight> atoms;
  const Weight w(1, static_cast<long long>(unit_ball.size()));
  for (Vertex v = 0; v < space.vertex_count(); ++v) atoms[v] = w;
  return AtomicMeasure(atoms);
}

AtomicMeasure net_measure(const Net& net, const VertexSet& unit_ball) {
  const std::size_t k = count_in(unit_ball, net.members);
  require(k > 0, Errc::EmptyNormalizer, "net misses the unit ball");
  std::map<Vertex, Weight> atoms;
  const Weight w(1, static_cast<long long>(k));
  for (Vertex v : net.members) atoms[v] = w;
  return AtomicMeasure(atoms);
}

AtomicMeasure restrict_to(const AtomicMeasure& measure, const VertexSet& set) {
  std::map<Vertex, Weight> atoms;
  for (const auto& [v, w] : measure.atoms()) {
    if (set_contains(set, v)) atoms.emplace(v, w);
  }
  return AtomicMeasure(atoms);
}

AtomicMeasure pushforward(const AtomicMeasure& measure, const BiLipMap& map) {
  std::map<Vertex, Weight> atoms;
  for (const auto& [v, w] : measure.atoms()) {
    const auto image = map.image(v);
    require(image.has_value(), Errc::SupportOutsideDomain,
            "atom at vertex " + std::to_string(v) + " lies outside the map domain");
    atoms[*image] += w;
  }
  return AtomicMeasure(atoms);
}

QuasiEquivalenceReport quasi_equivalence(const AtomicMeasure& mu, const AtomicMeasure& nu) {
  QuasiEquivalenceReport report;
  auto visit = [&](Vertex v) {
    const double q = ratio_of(to_double(mu.weight(v)), to_double(nu.weight(v)));
    if (q > report.alpha || report.witness < 0) {
      report.alpha = std::max(report.alpha, q);
      report.witness = v;
    }
  };
  for (const auto& [v, w] : mu.atoms()) visit(v);
  for (const auto& [v, w] : nu.atoms()) visit(v);
  return report;
}

QuasiEquivalenceReport quasi_equivalence_on(const AtomicMeasure& mu, const AtomicMeasure& nu,
                                            const std::vector<VertexSet>& family) {
  QuasiEquivalenceReport report;
  for (std::size_t i = 0; i < family.size(); ++i) {
    const double q = ratio_of(mu.measure_of_double(family[i]), nu.measure_of_double(family[i]));
    if (q > report.alpha) {
      report.alpha = q;
      report.witness_set = i;
      report.witness = family[i].empty() ? -1 : family[i].front();
    }
  }
  return report;
}

std::vector<VertexSet> ball_family(const MetricSurface& space, std::span<const Vertex> centers,
                                   double radius, const VertexSet& within) {
  std::vector<VertexSet> family;
  for (Vertex c : centers) {
    VertexSet b = ball(space, c, radius);
    if (std::includes(within.begin(), within.end(), b.begin(), b.end())) {
      family.push_back(std::move(b));
    }
  }
  return family;
}

HaarResult haar_like(const MetricSurface& space, const std::vector<double>& epsilons,
                     const std::vector<std::uint64_t>& seeds, const RegionSpec& unit_ball,
                     double tolerance, std::optional<double> test_radius) {
  require(epsilons.size() >= 3, Errc::InsufficientScales, "haar_like needs at least 3 epsilons");
  require(seeds.size() >= 2, Errc::InsufficientScales, "haar_like needs at least 2 seeds");
  for (std::size_t i = 0; i < epsilons.size(); ++i) {
    require(epsilons[i] > 0.0, Errc::BadEpsilon, "epsilons must be positive");
    require(i == 0 || epsilons[i] < epsilons[i - 1], Errc::InsufficientScales,
            "epsilons must be strictly decreasing");
  }
  require(epsilons.front() >= 2.0 * epsilons.back() * (1 - kTolerance), Errc::InsufficientScales,
          "epsilons must span at least one octave");
  const VertexSet unit = ball(space, unit_ball);

  const std::size_t ne = epsilons.size();
  std::vector<std::optional<Net>> nets(seeds.size() * ne);
  parallel_for(nets.size(), [&](std::size_t i) {
    nets[i] = maximal_net(space, epsilons[i % ne], seeds[i / ne]);
  });
  std::vector<std::vector<AtomicMeasure>> measures(seeds.size());
  std::vector<std::vector<std::size_t>> normalizers(seeds.size());
  for (std::size_t s = 0; s < seeds.size(); ++s) {
    for (std::size_t e = 0; e < ne; ++e) {
      const Net& net = *nets[s * ne + e];
      normalizers[s].push_back(count_in(unit, net.members));
      measures[s].push_back(net_measure(net, unit));
    }
  }

  const double radius = test_radius.value_or(2.0 * epsilons.front());
  const Net centers = maximal_net(space, radius, seeded_order(unit, 0));
  VertexSet all(space.vertex_count());
  for (Vertex v = 0; v < space.vertex_count(); ++v) all[v] = v;
  const auto family = ball_family(space, centers.members, radius, all);

  HaarResult out{measures.front().back(), {}, epsilons, seeds, {}, normalizers, radius, tolerance,
                 true};
  for (std::size_t s = 0; s < seeds.size(); ++s) out.per_seed.push_back(measures[s].back());
  for (std::size_t e = 0; e + 1 < ne; ++e) {
    DriftRow row;
    row.epsilon_coarse = epsilons[e];
    row.epsilon_fine = epsilons[e + 1];
    row.max_ratio = quasi_equivalence_on(measures[0][e], measures[0][e + 1], family).alpha;
    row.per_octave = std::pow(row.max_ratio, 1.0 / std::log2(epsilons[e] / epsilons[e + 1]));
    out.converged = out.converged && row.per_octave <= tolerance;
    out.drift.push_back(row);
  }
  return out;
}

QuasiInvarianceReport quasi_invariance_check(const MetricSurface& space,
                                             const AtomicMeasure& measure,
                                             const std::vector<BiLipMap>& suite,
                                             Granularity granularity, double ball_radius,
                                             std::optional<std::pair<double, double>> assouad) {
  require(!suite.empty(), Errc::BadParameters, "map suite is empty");
  require(granularity == Granularity::Atoms || ball_radius > 0.0, Errc::BadParameters,
          "ball granularity needs a positive radius");
  std::vector<double> alphas(suite.size(), 1.0);
  parallel_for(suite.size(), [&](std::size_t i) {
    const BiLipMap& f = suite[i];
    const VertexSet& dom = f.domain();
    bool meets = false;
    for (const auto& [v, w] : measure.atoms()) meets = meets || set_contains(dom, v);
    require(meets, Errc::SupportOutsideDomain, "measure support misses the map domain");
    const AtomicMeasure pushed = pushforward(restrict_to(measure, dom), f);
    const VertexSet image = make_vertex_set(f.images());
    VertexSet common;
    std::set_intersection(dom.begin(), dom.end(), image.begin(), image.end(),
                          std::back_inserter(common));
    double alpha = 1.0;
    if (granularity == Granularity::Atoms) {
      for (Vertex v : common) {
        alpha = std::max(alpha, ratio_of(to_double(measure.weight(v)), to_double(pushed.weight(v))));
      }
    } else {
      const auto family = ball_family(space, common, ball_radius, common);
      alpha = quasi_equivalence_on(measure, pushed, family).alpha;
    }
    alphas[i] = alpha;
  });
  QuasiInvarianceReport report;
  for (std::size_t i = 0; i < suite.size(); ++i) {
    if (alphas[i] > report.alpha_star) {
      report.alpha_star = alphas[i];
      report.worst_map = i;
    }
    report.max_constant = std::max(report.max_constant, suite[i].constant());
  }
  if (assouad) report.theoretical_bound = assouad->first * std::pow(report.max_constant, assouad->second);
  return report;
}

BallMeasureBounds ball_measure_bounds(const MetricSurface& space, const AtomicMeasure& measure,
                                      const std::vector<BiLipMap>& suite, double epsilon,
                                      const RegionSpec& unit_ball, std::span<const Vertex> points,
                                      double alpha) {
  require(epsilon > 0.0, Errc::BadEpsilon, "epsilon must be positive");
  require(epsilon < unit_ball.radius / 2.0, Errc::RegionTooSmall,
          "epsilon must be below half the unit radius");
  require(!points.empty(), Errc::RegionTooSmall, "no region points");
  BallMeasureBounds out;
  for (const BiLipMap& f : suite) out.lipschitz = std::max(out.lipschitz, f.constant());
  const double L = out.lipschitz;
  const VertexSet unit = ball(space, unit_ball);
  out.c_eps = count_in(unit, maximal_net(space, epsilon).members);
  require(out.c_eps > 0, Errc::EmptyNormalizer, "net misses the unit ball");
  const double c = static_cast<double>(out.c_eps);
  out.k = kInf;
  out.h = 0.0;
  for (Vertex p : points) {
    out.k = std::min(out.k, measure.measure_of_double(ball(space, p, L * epsilon)) * c);
    out.h = std::max(out.h, measure.measure_of_double(ball(space, p, epsilon / (2 * L))) * c);
  }
  out.pass = out.k > 0.0 && std::isfinite(out.h);
  out.k_predicted =
      measure.measure_of_double(ball(space, unit_ball.center, unit_ball.radius / 2)) / alpha;
  out.h_predicted =
      alpha * measure.measure_of_double(ball(space, unit_ball.center, 1.5 * unit_ball.radius));
  return out;
}

GrowthReport growth_exponents(const MetricSurface& space, const AtomicMeasure& measure,
                              std::span<const Vertex> points, const std::vector<double>& radii,
                              std::optional<std::pair<double, double>> assouad_hausdorff,
                              double slack) {
  require(radii.size() >= 4, Errc::InsufficientRadii, "growth needs at least 4 radii");
  require(!points.empty(), Errc::BadParameters, "growth needs at least one point");
  const auto [lo, hi] = std::minmax_element(radii.begin(), radii.end());
  require(*lo > 0.0, Errc::InsufficientRadii, "radii must be positive");
  require(*hi >= 4.0 * *lo * (1 - kTolerance), Errc::InsufficientRadii,
          "radii must span at least two octaves");
  GrowthReport out;
  out.lower = kInf;
  out.upper = -kInf;
  std::vector<double> all_x;
  std::vector<double> all_y;
  for (Vertex p : points) {
    std::vector<double> x;
    std::vector<double> y;
    for (double r : radii) {
      const double m = measure.measure_of_double(ball(space, p, r));
      require(m > 0.0, Errc::ZeroMeasureOnBall,
              "ball at " + std::to_string(p) + " of radius " + std::to_string(r) + " has measure 0");
      x.push_back(std::log(r));
      y.push_back(std::log(m));
    }
    const LinearFit fit = least_squares(x, y);
    out.per_point.push_back(fit.slope);
    out.lower = std::min(out.lower, fit.slope);
    out.upper = std::max(out.upper, fit.slope);
    out.fit_quality = std::min(out.fit_quality, fit.r_squared);
    all_x.insert(all_x.end(), x.begin(), x.end());
    all_y.insert(all_y.end(), y.begin(), y.end());
  }
  out.pooled = least_squares(all_x, all_y).slope;
  if (assouad_hausdorff) {
    const auto [A, H] = *assouad_hausdorff;
    out.sandwich = out.lower >= H - slack && out.upper <= A + slack;
  }
  return out;
}

ExistenceStepReport existence_step_check(const MetricSurface& space, const Net& net,
                                         const std::vector<BiLipMap>& suite,
                                         const std::vector<NestedBalls>& pairs, double C,
                                         double D) {
  for (const NestedBalls& pr : pairs) {
    require(pr.outer - pr.inner >= net.epsilon * (1 - kTolerance), Errc::BadParameters,
            "nested balls need outer - inner >= epsilon");
  }
  ExistenceStepReport report;
  for (const BiLipMap& f : suite) {
    const VertexSet& dom = f.domain();
    const VertexSet image = make_vertex_set(f.images());
    std::vector<Vertex> fn;
    for (Vertex m : net.members) {
      if (auto w = f.image(m)) fn.push_back(*w);
    }
    const double bound_factor = C * std::pow(f.constant(), D);
    for (const NestedBalls& pr : pairs) {
      const VertexSet outer = ball(space, pr.center, pr.outer);
      const VertexSet inner = ball(space, pr.center, pr.inner);
      if (!std::includes(dom.begin(), dom.end(), outer.begin(), outer.end())) continue;
      if (!std::includes(image.begin(), image.end(), inner.begin(), inner.end())) continue;
      const double lhs = static_cast<double>(count_in(inner, fn));
      const double rhs = bound_factor * static_cast<double>(count_in(outer, net.members));
      ++report.checks;
      if (lhs > rhs + kTolerance) ++report.failures;
      report.worst_ratio = std::max(report.worst_ratio, rhs > 0.0 ? lhs / rhs : (lhs > 0 ? kInf : 0.0));
    }
  }
  return report;
}

double curve_mass_fraction(const MetricSurface& space, const AtomicMeasure& measure,
                           std::span<const Vertex> curve, double r) {
  const VertexSet on_curve = make_vertex_set({curve.begin(), curve.end()});
  VertexSet around;
  for (const auto& [v, d] : space.reach(on_curve, r)) around.push_back(v);
  std::sort(around.begin(), around.end());
  const double whole = measure.measure_of_double(around);
  require(whole > 0.0, Errc::ZeroMeasureOnBall, "curve neighborhood has measure 0");
  return measure.measure_of_double(on_curve) / whole;
}

double uniqueness_beta(double m, double alpha, double k, double h) {
  require(k > 0.0, Errc::BadParameters, "k must be positive");
  return m * alpha * (h / k);
}

void write_measure_json(std::ostream& out, const AtomicMeasure& measure) {
  nlohmann::ordered_json weights = nlohmann::ordered_json::object();
  for (const auto& [v, w] : measure.atoms()) {
    weights[std::to_string(v)] = std::to_string(w.numerator()) + "/" + std::to_string(w.denominator());
  }
  nlohmann::ordered_json doc;
  doc["weights"] = weights;
  out << doc.dump(2) << '\n';
}

AtomicMeasure read_measure_json(std::istream& in) {
  nlohmann::json doc;
  try {
    in >> doc;
  } catch (const nlohmann::json::exception& e) {
    fail(Errc::IoError, std::string("measure file is not valid JSON: ") + e.what());
  }
  require(doc.contains("weights") && doc["weights"].is_object(), Errc::IoError,
          "measure file needs a 'weights' object");
  std::map<Vertex, Weight> atoms;
  for (const auto& [key, value] : doc["weights"].items()) {
    require(value.is_string(), Errc::IoError, "weights must be 'num/den' strings");
    const std::string text = value.get<std::string>();
    long long num = 0;
    long long den = 1;
    char slash = '/';
    std::istringstream parse(text);
    parse >> num;
    if (!parse.eof()) parse >> slash >> den;
    require(!parse.fail() && slash == '/' && den > 0, Errc::IoError, "bad weight '" + text + "'");
    atoms[static_cast<Vertex>(std::stol(key))] = Weight(num, den);
  }
  return AtomicMeasure(atoms);
}

}  // namespace geosurf
