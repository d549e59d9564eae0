#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <sstream>

#include "geosurf/measures.hpp"
#include "geosurf/regression.hpp"
#include "oracles.hpp"

using namespace geosurf;

namespace {

VertexSet all_vertices(const MetricSurface& s) {
  VertexSet v(s.vertex_count());
  for (Vertex i = 0; i < s.vertex_count(); ++i) v[i] = i;
  return v;
}

/// Independent greedy net over a distance table in ascending id order.
std::vector<Vertex> greedy_net(const std::vector<std::vector<double>>& d, double eps) {
  std::vector<Vertex> members;
  for (Vertex v = 0; v < static_cast<Vertex>(d.size()); ++v) {
    bool far = true;
    for (Vertex m : members) far = far && d[v][m] >= eps - 1e-9;
    if (far) members.push_back(v);
  }
  return members;
}

/// Slope of log y against log x by the closed-form least-squares formula.
double loglog_slope(const std::vector<double>& x, const std::vector<double>& y) {
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  const double n = static_cast<double>(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double lx = std::log(x[i]), ly = std::log(y[i]);
    sx += lx, sy += ly, sxx += lx * lx, sxy += lx * ly;
  }
  return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

}  // namespace

TEST_CASE("net measures normalize the unit ball exactly") {
  const auto p5 = oracle::path_graph(5);
  const auto net = maximal_net(p5, 2.0);
  const auto unit = ball(p5, 2, 2.0);
  const auto mu = net_measure(net, unit);
  CHECK(mu.measure_of(unit) == Weight(1));
  CHECK(mu.weight(0) == Weight(1, 3));
  CHECK(mu.weight(1) == Weight(0));

  const auto g = euclidean_grid(17, 1.0);
  for (double eps : {1.0, 2.0, 3.0, 5.0}) {
    for (std::uint64_t seed : {0u, 4u}) {
      const auto gunit = ball(g, g.origin(), 6.0);
      CHECK(net_measure(maximal_net(g, eps, seed), gunit).measure_of(gunit) == Weight(1));
    }
  }
  Net single;
  single.epsilon = 1.0;
  single.members = {2};
  CHECK(net_measure(single, unit).weight(2) == Weight(1));
  Net outside;
  outside.members = {0};
  CHECK_THROWS_AS(net_measure(outside, VertexSet{3, 4}), Error);
}

TEST_CASE("pushforward") {
  const auto g = euclidean_grid(7, 1.0);
  const auto block = ball(g, g.origin(), 1.0);
  const auto mu = counting_measure(block);
  CHECK(pushforward(mu, certify_bilip(g, block, block)).atoms() == mu.atoms());

  std::vector<Vertex> shifted;
  for (Vertex v : block) shifted.push_back(v + 1);
  const auto moved = pushforward(mu, certify_bilip(g, block, shifted));
  CHECK(moved.support() == make_vertex_set(shifted));
  CHECK(moved.mass() == mu.mass());
  for (Vertex v : shifted) CHECK(moved.weight(v) == Weight(1));

  const auto bigger = counting_measure(ball(g, g.origin(), 2.0));
  CHECK_THROWS_AS(pushforward(bigger, certify_bilip(g, block, shifted)), Error);
  const std::vector<Vertex> collapse{block[0], block[0], block[1], block[2], block[3]};
  CHECK_THROWS_AS(certify_bilip(g, block, collapse), Error);
}

TEST_CASE("quasi-equivalence constants") {
  const auto mu = AtomicMeasure({{0, Weight(1, 2)}, {1, Weight(1, 3)}, {4, Weight(2)}});
  CHECK(quasi_equivalence(mu, mu).alpha == 1.0);
  CHECK(quasi_equivalence(mu, mu.scaled(3)).alpha == doctest::Approx(3.0));
  CHECK(quasi_equivalence(mu.scaled(Weight(1, 5)), mu).alpha == doctest::Approx(5.0));
  const auto a = AtomicMeasure({{0, Weight(1)}});
  const auto b = AtomicMeasure({{1, Weight(1)}});
  CHECK(std::isinf(quasi_equivalence(a, b).alpha));
  const auto nu = AtomicMeasure({{0, Weight(1)}, {1, Weight(1, 6)}, {4, Weight(1)}});
  CHECK(quasi_equivalence(mu, nu).alpha == quasi_equivalence(nu, mu).alpha);
  CHECK(quasi_equivalence(mu, nu).alpha == doctest::Approx(2.0));
  CHECK_THROWS_AS(AtomicMeasure({{0, Weight(0)}}), Error);

  // Mediant inequality: the per-atom constant bounds every subset.
  const double alpha = quasi_equivalence(mu, nu).alpha;
  const std::vector<Vertex> atoms{0, 1, 4};
  for (int mask = 1; mask < 8; ++mask) {
    std::vector<Vertex> set;
    for (int i = 0; i < 3; ++i)
      if (mask >> i & 1) set.push_back(atoms[i]);
    const double m = mu.measure_of_double(set), n = nu.measure_of_double(set);
    CHECK(m <= alpha * n + 1e-12);
    CHECK(n <= alpha * m + 1e-12);
  }
}

TEST_CASE("haar_like on the euclidean grid") {
  const auto g = euclidean_grid(33, 1.0);
  const RegionSpec unit{g.origin(), 8.0};
  const auto haar = haar_like(g, {4.0, 2.0, 1.0}, {0, 1}, unit);
  const auto uniform = uniform_measure(g, ball(g, unit));
  // The eps = 1 net contains every vertex.
  CHECK(quasi_equivalence(haar.measure, uniform).alpha == 1.0);
  CHECK(haar.drift.size() == 2);
  for (const auto& row : haar.drift) CHECK(row.max_ratio <= 4.0);
  CHECK(haar.normalizers[0][2] == 145);
  CHECK_THROWS_AS(haar_like(g, {2.0}, {0, 1}, unit), Error);
  CHECK_THROWS_AS(haar_like(g, {4.0, 3.0, 2.5}, {0, 1}, unit), Error);
}

TEST_CASE("haar_like on a tree") {
  const auto t = tree(2, 6, 1.0);
  const RegionSpec unit{0, 4.0};
  const auto haar = haar_like(t, {4.0, 2.0, 1.0}, {0, 3}, unit);
  const auto d = oracle::floyd(t);
  const auto unit_ball = ball(t, unit);
  for (std::size_t e = 0; e < 3; ++e) {
    const auto members = greedy_net(d, haar.epsilons[e]);
    std::size_t in_unit = 0;
    for (Vertex m : members) in_unit += set_contains(unit_ball, m);
    CHECK(haar.normalizers[0][e] == in_unit);
  }
  CHECK(haar.normalizers[0] == std::vector<std::size_t>{9, 21, 31});
}

TEST_CASE("quasi-invariance under map suites") {
  const auto g = euclidean_grid(21, 1.0);
  const RegionSpec region{g.origin(), 4.0};
  const auto iso = map_suite(g, MapKind::Translations, region, 3.0);
  const auto rot = map_suite(g, MapKind::Rotations, region, 3.0);
  auto suite = iso;
  suite.insert(suite.end(), rot.begin(), rot.end());
  const auto uniform = uniform_measure(g, ball(g, region));
  CHECK(quasi_invariance_check(g, uniform, suite, Granularity::Atoms).alpha_star == 1.0);

  const auto net = maximal_net(g, 2.0, 5);
  const auto mu = net_measure(net, ball(g, region));
  const auto report = quasi_invariance_check(g, mu, iso, Granularity::Balls, 4.0, {{6.0, 2.0}});
  CHECK(std::isfinite(report.alpha_star));
  CHECK(report.theoretical_bound == doctest::Approx(6.0));
  CHECK(report.alpha_star <= *report.theoretical_bound);

  const auto far = AtomicMeasure({{0, Weight(1)}});
  CHECK_THROWS_AS(quasi_invariance_check(g, far, iso, Granularity::Atoms), Error);
}

TEST_CASE("ball measure bounds") {
  const auto g = euclidean_grid(17, 1.0);
  const RegionSpec unit{g.origin(), 5.0};
  const auto unit_ball = ball(g, unit);
  CHECK(unit_ball.size() == 61);
  const auto uniform = uniform_measure(g, unit_ball);
  const auto points = ball(g, g.origin(), 3.0);
  const auto bounds = ball_measure_bounds(g, uniform, {}, 2.0, unit, points);
  const auto members = greedy_net(oracle::floyd(g), 2.0);
  std::size_t c = 0;
  for (Vertex m : members) c += set_contains(unit_ball, m);
  CHECK(bounds.c_eps == c);
  // |B(p,2)| = 13 and |B(p,1)| = 5 for every interior point.
  CHECK(bounds.k == doctest::Approx(13.0 / 61.0 * c));
  CHECK(bounds.h == doctest::Approx(5.0 / 61.0 * c));
  CHECK(bounds.pass);
  CHECK(bounds.k_predicted == doctest::Approx(13.0 / 61.0));

  const auto atom = AtomicMeasure({{g.origin(), Weight(1)}});
  const auto single = ball_measure_bounds(g, atom, {}, 2.0, unit, points);
  CHECK(single.k == 0.0);
  CHECK_FALSE(single.pass);
  CHECK_THROWS_AS(ball_measure_bounds(g, uniform, {}, 3.0, unit, points), Error);
}

TEST_CASE("growth exponents") {
  const auto g = euclidean_grid(65, 1.0);
  const auto uniform = uniform_measure(g, ball(g, g.origin(), 1.0));
  const std::vector<double> radii{2, 4, 8, 16};
  const Vertex o = g.origin();
  const auto report = growth_exponents(g, uniform, std::vector<Vertex>{o}, radii);
  std::vector<double> counts;
  for (double r : radii) counts.push_back(2 * r * r + 2 * r + 1);
  const double expected = loglog_slope(radii, counts);
  CHECK(report.pooled == doctest::Approx(expected));
  CHECK(expected == doctest::Approx(1.79914).epsilon(1e-5));

  const auto atom = AtomicMeasure({{o, Weight(1)}});
  const auto flat = growth_exponents(g, atom, std::vector<Vertex>{o}, radii, {{2.0, 2.0}}, 0.3);
  CHECK(flat.upper == doctest::Approx(0.0));
  CHECK(flat.sandwich == false);

  const auto t = tree(2, 9, 1.0);
  const std::vector<double> tr{1, 2, 4, 8};
  const auto tg = growth_exponents(t, counting_measure(all_vertices(t)), std::vector<Vertex>{0}, tr);
  std::vector<double> tc;
  for (double r : tr) tc.push_back(std::pow(2.0, r + 1) - 1);
  CHECK(tg.pooled == doctest::Approx(loglog_slope(tr, tc)));
  CHECK_THROWS_AS(growth_exponents(g, uniform, std::vector<Vertex>{o}, {2, 4, 8}), Error);
}

TEST_CASE("existence proof step") {
  const auto g = euclidean_grid(25, 1.0);
  const RegionSpec region{g.origin(), 7.0};
  const auto suite = map_suite(g, MapKind::Shears, region, 1.0);
  REQUIRE(!suite.empty());
  const auto net = maximal_net(g, 1.5, 2);
  std::vector<NestedBalls> pairs;
  for (Vertex c : ball(g, g.origin(), 1.0)) pairs.push_back({c, 2.0, 4.0});
  const auto report = existence_step_check(g, net, suite, pairs, 4.0, 2.0);
  CHECK(report.checks > 0);
  CHECK(report.failures == 0);
}

TEST_CASE("net measures of a geodesic vanish relative to its neighborhood") {
  const auto g = euclidean_grid(49, 1.0);
  const auto row = geodesic(g, grid_vertex(g, 8, 24), grid_vertex(g, 40, 24));
  const auto unit = ball(g, g.origin(), 16.0);
  std::vector<double> fractions;
  for (double eps : {8.0, 4.0, 2.0, 1.0}) {
    fractions.push_back(curve_mass_fraction(g, net_measure(maximal_net(g, eps), unit), row.waypoints, 8.0));
  }
  for (std::size_t i = 1; i < fractions.size(); ++i) CHECK(fractions[i] < fractions[i - 1]);
}

TEST_CASE("measure files round-trip") {
  const auto mu = AtomicMeasure({{3, Weight(2, 7)}, {11, Weight(5)}});
  std::stringstream io;
  write_measure_json(io, mu);
  CHECK(io.str().find("\"3\": \"2/7\"") != std::string::npos);
  CHECK(read_measure_json(io).atoms() == mu.atoms());
  std::istringstream bad("{\"weights\": {\"1\": \"x\"}}");
  CHECK_THROWS_AS(read_measure_json(bad), Error);
}
