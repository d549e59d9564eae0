#pragma once

#include <boost/rational.hpp>
#include <iosfwd>
#include <limits>
#include <map>
#include <optional>

#include "geosurf/metric_surface.hpp"
#include "geosurf/nets.hpp"

namespace geosurf {

using Weight = boost::rational<long long>;

inline double to_double(const Weight& w) { return boost::rational_cast<double>(w); }

/// Finite nonzero measure with exact rational atoms.
class AtomicMeasure {
 public:
  /// Drops zero atoms; throws ZeroMeasure if nothing positive remains and
  /// BadParameters on a negative weight.
  explicit AtomicMeasure(const std::map<Vertex, Weight>& weights);

  const std::map<Vertex, Weight>& atoms() const { return atoms_; }
  const Weight& mass() const { return mass_; }
  Weight weight(Vertex v) const;
  Weight measure_of(std::span<const Vertex> set) const;
  double measure_of_double(std::span<const Vertex> set) const { return to_double(measure_of(set)); }
  VertexSet support() const;
  AtomicMeasure scaled(const Weight& factor) const;

 private:
  std::map<Vertex, Weight> atoms_;
  Weight mass_{0};
};

/// Weight 1 on every listed vertex.
AtomicMeasure counting_measure(std::span<const Vertex> vertices);
/// Counting measure normalized so that the unit ball has measure 1.
AtomicMeasure uniform_measure(const MetricSurface& space, const VertexSet& unit_ball);

/// Weight 1/|net ∩ unit_ball| on every net member.
AtomicMeasure net_measure(const Net& net, const VertexSet& unit_ball);

/// Restriction to a set; throws ZeroMeasure if the result vanishes.
AtomicMeasure restrict_to(const AtomicMeasure& measure, const VertexSet& set);

/// f_* measure; every atom must lie in the map domain.
AtomicMeasure pushforward(const AtomicMeasure& measure, const BiLipMap& map);

struct QuasiEquivalenceReport {
  double alpha = 1.0;  // infinity when one side vanishes where the other does not
  Vertex witness = -1;
  std::size_t witness_set = 0;
};

/// Per-atom constant; by the mediant inequality it bounds every set.
QuasiEquivalenceReport quasi_equivalence(const AtomicMeasure& mu, const AtomicMeasure& nu);
/// Constant over a declared family of test sets.
QuasiEquivalenceReport quasi_equivalence_on(const AtomicMeasure& mu, const AtomicMeasure& nu,
                                            const std::vector<VertexSet>& family);

/// Closed balls of the given radius centered at every vertex of `centers`
/// whose ball lies inside `within`.
std::vector<VertexSet> ball_family(const MetricSurface& space, std::span<const Vertex> centers,
                                   double radius, const VertexSet& within);

struct DriftRow {
  double epsilon_coarse = 0.0;
  double epsilon_fine = 0.0;
  double max_ratio = 1.0;     // max over test balls of max(q, 1/q)
  double per_octave = 1.0;    // max_ratio^(1/octaves)
};

struct HaarResult {
  AtomicMeasure measure;                 // finest epsilon, first seed
  std::vector<AtomicMeasure> per_seed;   // finest epsilon, one per seed
  std::vector<double> epsilons;          // decreasing
  std::vector<std::uint64_t> seeds;
  std::vector<DriftRow> drift;           // first seed, consecutive epsilon pairs
  std::vector<std::vector<std::size_t>> normalizers;  // [seed][epsilon] = |N_eps ∩ B_1|
  double test_radius = 0.0;
  double tolerance = 2.0;
  bool converged = false;
};

/// Net measures across epsilons and seeds with a drift report on balls of
/// radius test_radius (default 2 * max epsilon) inside the unit ball.
HaarResult haar_like(const MetricSurface& space, const std::vector<double>& epsilons,
                     const std::vector<std::uint64_t>& seeds, const RegionSpec& unit_ball,
                     double tolerance = 2.0, std::optional<double> test_radius = std::nullopt);

enum class Granularity { Atoms, Balls };

struct QuasiInvarianceReport {
  double alpha_star = 1.0;
  std::size_t worst_map = 0;
  double max_constant = 1.0;
  std::optional<double> theoretical_bound;  // C * L^D when C, D are supplied
};

/// max over maps f of the quasi-equivalence constant between the measure and
/// f_*(measure restricted to the domain of f), compared on D ∩ f(D): per atom,
/// or on balls of radius `ball_radius` lying inside D ∩ f(D).
QuasiInvarianceReport quasi_invariance_check(const MetricSurface& space,
                                             const AtomicMeasure& measure,
                                             const std::vector<BiLipMap>& suite,
                                             Granularity granularity, double ball_radius = 0.0,
                                             std::optional<std::pair<double, double>> assouad = {});

struct BallMeasureBounds {
  double lipschitz = 1.0;
  std::size_t c_eps = 0;
  double k = 0.0;
  double h = 0.0;
  bool pass = false;
  double k_predicted = 0.0;
  double h_predicted = 0.0;
};

/// Empirical k = min_p mu(B(p, L eps)) c_eps and h = max_p mu(B(p, eps/2L)) c_eps
/// over region points, with the predicted k = mu(B_1/2)/alpha and h = alpha mu(B_3/2).
BallMeasureBounds ball_measure_bounds(const MetricSurface& space, const AtomicMeasure& measure,
                                      const std::vector<BiLipMap>& suite, double epsilon,
                                      const RegionSpec& unit_ball, std::span<const Vertex> points,
                                      double alpha = 1.0);

struct GrowthReport {
  double lower = 0.0;
  double upper = 0.0;
  double pooled = 0.0;
  double fit_quality = 1.0;  // worst per-point r^2
  std::vector<double> per_point;
  std::optional<bool> sandwich;  // lower >= H - t and upper <= A + t
};

GrowthReport growth_exponents(const MetricSurface& space, const AtomicMeasure& measure,
                              std::span<const Vertex> points, const std::vector<double>& radii,
                              std::optional<std::pair<double, double>> assouad_hausdorff = {},
                              double slack = 0.0);

struct ExistenceStepReport {
  std::size_t checks = 0;
  std::size_t failures = 0;
  double worst_ratio = 0.0;  // max of lhs / (C L^D rhs)
};

/// Nested ball pair sharing a center: B'' = ball(center, inner), B' = ball(center, outer).
struct NestedBalls {
  Vertex center = 0;
  double inner = 0.0;
  double outer = 0.0;
};

/// Checks #(B'' ∩ f(N)) <= C L^D #(B' ∩ N) for each map and each pair with
/// outer - inner >= net epsilon, B' inside the domain and B'' inside the image.
ExistenceStepReport existence_step_check(const MetricSurface& space, const Net& net,
                                         const std::vector<BiLipMap>& suite,
                                         const std::vector<NestedBalls>& pairs, double C,
                                         double D);

/// mu(curve) / mu(r-neighborhood of curve).
double curve_mass_fraction(const MetricSurface& space, const AtomicMeasure& measure,
                           std::span<const Vertex> curve, double r);

/// Constructive beta = m * alpha * (h / k).
double uniqueness_beta(double m, double alpha, double k, double h);

void write_measure_json(std::ostream& out, const AtomicMeasure& measure);
AtomicMeasure read_measure_json(std::istream& in);

}  // namespace geosurf
