#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "geosurf/dimension.hpp"
#include "geosurf/nets.hpp"
#include "oracles.hpp"

using namespace geosurf;

namespace {

int l1(const MetricSurface& g, Vertex a, Vertex b) {
  const auto [ax, ay] = grid_point(g, a);
  const auto [bx, by] = grid_point(g, b);
  return std::abs(ax - bx) + std::abs(ay - by);
}

/// Greedy closed-ball cover of the l1 ball(p, 2R) in id order, by l1 distances.
int grid_greedy_cover(const MetricSurface& g, Vertex p, int R) {
  std::vector<Vertex> centers;
  for (Vertex v = 0; v < g.vertex_count(); ++v) {
    if (l1(g, p, v) > 2 * R) continue;
    bool covered = false;
    for (Vertex c : centers) covered = covered || l1(g, c, v) <= R;
    if (!covered) centers.push_back(v);
  }
  return static_cast<int>(centers.size());
}

/// Greedy eps-net count of the l1 ball(p, r) in id order.
std::size_t grid_net_count(const MetricSurface& g, Vertex p, int r, int eps) {
  std::vector<Vertex> members;
  for (Vertex v = 0; v < g.vertex_count(); ++v) {
    if (l1(g, p, v) > r) continue;
    bool far = true;
    for (Vertex m : members) far = far && l1(g, m, v) >= eps;
    if (far) members.push_back(v);
  }
  return members.size();
}

}  // namespace

TEST_CASE("doubling constants") {
  const auto p21 = oracle::path_graph(21);
  const auto d = oracle::floyd(p21);
  int oracle_n = 1;
  for (Vertex p = 2; p <= 18; ++p) {
    for (double s : {1.0, 2.0, 4.0}) {
      std::vector<Vertex> centers;
      for (Vertex v = 0; v < 21; ++v) {
        if (d[p][v] > 2 * s) continue;
        bool covered = false;
        for (Vertex c : centers) covered = covered || d[c][v] <= s;
        if (!covered) centers.push_back(v);
      }
      oracle_n = std::max(oracle_n, static_cast<int>(centers.size()));
    }
  }
  CHECK(oracle_n == 4);
  CHECK(doubling_constant(p21, {10, 8.0}, {1.0, 2.0, 4.0}) == oracle_n);
  CHECK(doubling_constant(p21, {10, 0.5}, {0.25}) == 1);
  CHECK_THROWS_AS(doubling_constant(p21, {10, 4.0}, {4.0}), Error);

  const auto g = euclidean_grid(33, 1.0);
  int grid_oracle = 1;
  for (Vertex p : ball(g, g.origin(), 8.0))
    for (int s : {2, 4}) grid_oracle = std::max(grid_oracle, grid_greedy_cover(g, p, s));
  const int n = doubling_constant(g, {g.origin(), 8.0}, {2.0, 4.0});
  CHECK(n == grid_oracle);
  CHECK(n <= 25);
}

TEST_CASE("doubling constant is invariant under metric scaling") {
  const auto a = euclidean_grid(21, 1.0);
  const auto b = euclidean_grid(21, 2.5);
  CHECK(doubling_constant(a, {a.origin(), 6.0}, {1.0, 2.0, 3.0}) ==
        doubling_constant(b, {b.origin(), 15.0}, {2.5, 5.0, 7.5}));
}

TEST_CASE("Assouad estimates") {
  const auto g = euclidean_grid(65, 1.0);
  const Vertex o = g.origin();
  const std::vector<Vertex> pts{o, o + 1, o - 1, o + 65};
  const auto est = assouad_estimate(g, assouad_grid(pts, {16, 32}, {1, 2, 4, 8, 16}));
  CHECK(est.fit.exponent >= 1.8);
  CHECK(est.fit.exponent <= 2.2);
  for (const auto& c : est.counts) {
    if (c.sample.p == o)
      CHECK(c.count == grid_net_count(g, o, static_cast<int>(c.sample.r), static_cast<int>(c.sample.delta)));
  }
  for (const auto& c : est.counts) {
    const double bound = est.fit.constant * std::pow(c.sample.r / c.sample.delta, est.fit.exponent);
    if (c.sample.r / c.sample.delta >= 8 && c.count < c.ball_size) CHECK(c.count <= bound * (1 + 1e-9));
  }

  const auto p33 = oracle::path_graph(33);
  const auto ep = assouad_estimate(p33, assouad_grid(std::vector<Vertex>{15, 16, 17}, {8, 16}, {1, 2, 4, 8}));
  CHECK(ep.fit.exponent >= 0.9);
  CHECK(ep.fit.exponent <= 1.1);

  const auto s = snowflake_grid(32, 1.0, 0.5);
  const Vertex so = s.origin();
  const auto es = assouad_estimate(
      s, assouad_grid(std::vector<Vertex>{so, so + 1}, {std::sqrt(15.0), std::sqrt(12.0)},
                      {0.5, 1.0, std::sqrt(2.0), 2.0, std::sqrt(8.0)}));
  CHECK(es.fit.exponent >= 3.5);
  CHECK(es.fit.exponent <= 4.5);
  // Base l1 radius 15 with base separations 2, 4, 8.
  for (const auto& c : es.counts) {
    if (c.sample.p != so || c.sample.r < 3.8) continue;
    if (nearly_equal(c.sample.delta, 2.0)) CHECK(c.count == 64);
    if (nearly_equal(c.sample.delta, std::sqrt(8.0))) CHECK(c.count == 16);
  }

  CHECK_THROWS_AS(assouad_estimate(g, assouad_grid(pts, {8}, {2, 4})), Error);
  CHECK_THROWS_AS(assouad_estimate(g, assouad_grid(pts, {8, 9}, {4, 5})), Error);
}

TEST_CASE("Hausdorff dimension estimates") {
  const auto g = euclidean_grid(65, 1.0);
  const auto hg = hausdorff_dim_estimate(g, g.origin(), {1, 2, 4, 8});
  CHECK(hg.alpha == doctest::Approx(2.0).epsilon(0.1));
  CHECK(hg.per_seed.size() == 3);

  const auto p = oracle::path_graph(65);
  const auto hp = hausdorff_dim_estimate(p, 32, {0.5, 1, 2, 4}, {0, 1, 2}, 16.0);
  CHECK(hp.alpha == doctest::Approx(1.0).epsilon(0.1));

  const auto t = tree(3, 6, 1.0);
  const auto ht = hausdorff_dim_estimate(t, 0, {1, 2, 4, 8}, {0, 1, 2}, 6.0);
  CHECK(std::isfinite(ht.alpha));
  CHECK(ht.alpha > hg.alpha);
  CHECK_FALSE(ht.fit.residuals.empty());

  CHECK_THROWS_AS(hausdorff_dim_estimate(g, g.origin(), {1, 2, 4}), Error);
  CHECK_THROWS_AS(hausdorff_dim_estimate(g, g.origin(), {1, 1.5, 2, 3}), Error);
}

TEST_CASE("Hausdorff dimension stays below Assouad dimension") {
  const auto g = euclidean_grid(65, 1.0);
  const Vertex o = g.origin();
  const double a = assouad_estimate(g, assouad_grid(std::vector<Vertex>{o, o + 1}, {16, 32}, {1, 2, 4, 8, 16})).fit.exponent;
  const double h = hausdorff_dim_estimate(g, o, {1, 2, 4, 8}).alpha;
  CHECK(h <= a + 0.3);

  const auto p = oracle::path_graph(65);
  const double ap = assouad_estimate(p, assouad_grid(std::vector<Vertex>{31, 32, 33}, {8, 16}, {1, 2, 4, 8})).fit.exponent;
  const double hp = hausdorff_dim_estimate(p, 32, {0.5, 1, 2, 4}, {0, 1, 2}, 16.0).alpha;
  CHECK(hp <= ap + 0.3);
}

TEST_CASE("net counts grow at least like eps^-(alpha - t)") {
  const auto g = euclidean_grid(65, 1.0);
  const std::vector<double> eps{8, 4, 2, 1};
  const auto h = hausdorff_dim_estimate(g, g.origin(), eps);
  std::vector<double> scaled;
  for (std::size_t i = 0; i < eps.size(); ++i)
    scaled.push_back(static_cast<double>(h.counts[i]) * std::pow(eps[i], h.alpha - 0.3));
  for (std::size_t i = 1; i < scaled.size(); ++i) CHECK(scaled[i] >= scaled[0] * 0.9);
}

TEST_CASE("one-dimensional Hausdorff measure of curves") {
  const auto c4 = oracle::cycle_graph(4);
  CHECK(hausdorff1_length(c4, make_loop(c4, {0, 1, 2, 3})) == 4.0);
  CHECK(hausdorff1_length(c4, make_loop(c4, {2})) == 0.0);
  const auto g = euclidean_grid(7, 1.0);
  CHECK(hausdorff1_length(g, exterior_boundary(g, ball(g, g.origin(), 1.0))) == 16.0);
  CHECK(hausdorff1_length(g, geodesic(g, 0, 48)) == 12.0);
  CHECK_THROWS_AS(hausdorff1_length(g, Loop{{0, 8}, 0.0, true}), Error);
}

TEST_CASE("two-dimensional Hausdorff estimates") {
  const auto g = euclidean_grid(33, 1.0);
  const auto region = ball(g, g.origin(), 8.0);
  CHECK(inradius(g, region) == 9.0);
  CHECK(hausdorff2_estimate(g, region, 1.0) == 4.0 * region.size());
  CHECK(region.size() == 145);
  const double at_two = hausdorff2_estimate(g, region, 2.0);
  CHECK(at_two == 16.0 * grid_net_count(g, g.origin(), 8, 2));
  CHECK(at_two == 1296.0);
  CHECK(hausdorff2_estimate(g, VertexSet{g.origin()}, 0.5) == 1.0);
  CHECK_THROWS_AS(hausdorff2_estimate(g, region, 5.0), Error);
}

TEST_CASE("coarea lower bound") {
  CHECK(kCoareaConstant == doctest::Approx(0.7853981634));
  const auto g = euclidean_grid(33, 1.0);
  const auto zero = coarea_check(g, g.origin(), 0.0, 1.0);
  CHECK(zero.rhs == 0.0);
  CHECK(zero.pass);
  const auto report = coarea_check(g, g.origin(), 8.0, 1.0);
  REQUIRE(report.shells.size() == 8);
  double integral = 0.0;
  for (int t = 1; t <= 8; ++t) {
    CHECK(report.shells[t - 1].length == 8.0 * (t + 1));
    integral += 8.0 * (t + 1);
  }
  CHECK(report.rhs == doctest::Approx(kCoareaConstant * integral));
  CHECK(report.lhs == 580.0);
  CHECK(report.pass);
  CHECK_THROWS_AS(coarea_check(snowflake_grid(9, 1.0, 0.5), 40, 2.0, 1.0), Error);
  CHECK_THROWS_AS(coarea_check(g, g.origin(), 8.0, 2.0), Error);
}

TEST_CASE("coarea holds on geodesic grids") {
  for (const auto& space : {euclidean_grid(25, 1.0), euclidean_grid(25, 2.0),
                            conformal_grid(25, 1.0, [](int x, int y) { return 1.0 + (x + y) / 48.0; }, 2.0),
                            hyperbolic_grid(25, 1.0)}) {
    const double R = 4 * space.mesh();
    CHECK(coarea_check(space, space.origin(), R, space.min_edge(), 0.15).pass);
  }
}

TEST_CASE("quadratic lower bound") {
  const auto g = euclidean_grid(33, 1.0);
  const auto q = quadratic_lower_bound_check(g, {g.origin(), 8.0}, {4.0, 8.0});
  CHECK(q.c >= 1.0);
  CHECK(q.pass);
  const auto unit = quadratic_lower_bound_check(g, {g.origin(), 2.0}, {1.0});
  CHECK(unit.c == 20.0);

  const auto p = oracle::path_graph(65);
  const double c2 = quadratic_lower_bound_check(p, {32, 2.0}, {2.0}).c;
  const double c8 = quadratic_lower_bound_check(p, {32, 2.0}, {8.0}).c;
  const double c16 = quadratic_lower_bound_check(p, {32, 2.0}, {16.0}).c;
  CHECK(c8 < c2);
  CHECK(c16 < c8);
}
