#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "geosurf/generators.hpp"
#include "geosurf/surrounding.hpp"
#include "oracles.hpp"

using namespace geosurf;

namespace {

bool well_posed(const MetricSurface& g, Vertex p, double r) {
  for (Vertex v : ball(g, p, r))
    if (g.embedding().on_outer_face(v)) return false;
  return true;
}

}  // namespace

TEST_CASE("surrounds") {
  const auto g = euclidean_grid(7, 1.0);
  const Vertex c = g.origin();
  const auto inner = ball(g, c, 1.0);
  const Loop ring = exterior_boundary(g, inner);
  CHECK(ring.length == 16.0);
  CHECK(surrounds(g, ring, inner));
  const Loop side = make_loop(g, {grid_vertex(g, 4, 4), grid_vertex(g, 5, 4), grid_vertex(g, 5, 5), grid_vertex(g, 4, 5)});
  CHECK_FALSE(surrounds(g, side, inner));
  const Loop through = make_loop(g, {grid_vertex(g, 3, 3), grid_vertex(g, 4, 3), grid_vertex(g, 4, 4), grid_vertex(g, 3, 4)});
  CHECK_THROWS_AS(surrounds(g, through, inner), Error);
  const Loop unit = exterior_boundary(g, VertexSet{c});
  CHECK(unit.length == 8.0);
  CHECK(surrounds(g, unit, VertexSet{c}));
  CHECK_FALSE(surrounds(g, unit, VertexSet{grid_vertex(g, 0, 0)}));
}

TEST_CASE("enclosed component matches the polygon interior") {
  const auto g = euclidean_grid(9, 1.0);
  const Vertex c = g.origin();
  for (double r : {0.0, 1.0, 2.0}) {
    const SurResult s = sur(g, c, r);
    VertexSet inside;
    for (Vertex v = 0; v < g.vertex_count(); ++v)
      if (!set_contains(make_vertex_set(s.witness.waypoints), v) &&
          oracle::inside_polygon(g, s.witness.waypoints, g.coordinates()[v]))
        inside.push_back(v);
    CHECK(enclosed_component(g, s.witness, c) == inside);
  }
}

TEST_CASE("sur on the 7x7 grid") {
  const auto g = euclidean_grid(7, 1.0);
  const Vertex c = g.origin();
  const SurResult one = sur(g, c, 1.0);
  CHECK(one.value == 16.0);
  CHECK(one.witness.length == 16.0);
  CHECK(one.witness.simple);
  CHECK(surrounds(g, one.witness, ball(g, c, 1.0)));
  CHECK(one.value == oracle::enumerate_sur(g, c, 1.0, 0.0, 16.0));

  const SurResult zero = sur(g, c, 0.0);
  CHECK(zero.value == 8.0);
  CHECK(zero.witness.waypoints.size() == 8);
  CHECK(zero.value == oracle::enumerate_sur(g, c, 0.0, 0.0, 8.0));

  CHECK(sur(g, c, 1.0, 3.0).value == 16.0);
  CHECK_THROWS_AS(sur(g, c, 1.0, 2.0), Error);
  CHECK_THROWS_AS(sur(g, c, 1.0, 1.0), Error);
  CHECK_THROWS_AS(sur(g, c, 3.0), Error);
  CHECK_THROWS_AS(sur(g, c, -1.0), Error);
}

TEST_CASE("sur error guards") {
  try {
    sur(tree(2, 4, 1.0), 0, 1.0);
    FAIL("expected NoSurroundingLoop");
  } catch (const Error& e) {
    CHECK(e.code() == Errc::NoSurroundingLoop);
  }
  try {
    sur(oracle::cycle_graph(6), 0, 0.0);
    FAIL("expected NoEmbedding");
  } catch (const Error& e) {
    CHECK(e.code() == Errc::NoEmbedding);
  }
  try {
    const auto s = snowflake_grid(9, 1.0, 0.5);
    sur(s, s.origin(), 1.0);
    FAIL("expected NonGeodesicSpace");
  } catch (const Error& e) {
    CHECK(e.code() == Errc::NonGeodesicSpace);
  }
}

TEST_CASE("sur agrees with exhaustive enumeration on random planar spaces") {
  for (std::uint64_t seed = 1; seed <= 4; ++seed) {
    const auto g = oracle::random_planar(9, 9, seed);
    const Vertex p = g.origin();
    for (double r : {0.0, 2.0, 4.0}) {
      if (!well_posed(g, p, r)) continue;
      const SurResult s = sur(g, p, r);
      CHECK(surrounds(g, s.witness, ball(g, p, r)));
      CHECK(s.witness.simple);
      const double bound = exterior_boundary(g, ball(g, p, r)).length;
      CHECK(s.value == oracle::enumerate_sur(g, p, r, 0.0, bound));
    }
  }
}

TEST_CASE("localized sur agrees with exhaustive enumeration") {
  const auto g = oracle::random_planar(9, 9, 11);
  const Vertex p = g.origin();
  int solved = 0;
  for (double R : {6.0, 8.0, 10.0, 14.0}) {
    try {
      const SurResult s = sur(g, p, 1.0, R);
      CHECK(s.value >= sur(g, p, 1.0).value);
      CHECK(s.value == oracle::enumerate_sur(g, p, 1.0, R, s.value));
      for (Vertex v : s.witness.waypoints) CHECK(distance(g, p, v) <= R);
      ++solved;
    } catch (const Error& e) {
      CHECK(e.code() == Errc::NoSurroundingLoop);
    }
  }
  CHECK(solved > 0);
}

TEST_CASE("sur is non-decreasing in r and in shrinking local radius") {
  const auto g = euclidean_grid(21, 1.0);
  const Vertex c = g.origin();
  double prev = 0.0;
  for (double r : {0.0, 0.5, 1.0, 2.0, 3.0, 5.0}) {
    const double v = sur(g, c, r).value;
    CHECK(v >= prev);
    prev = v;
  }
  CHECK(sur(g, c, 2.0).value == 24.0);
  CHECK(sur(g, c, 2.0, 4.0).value >= sur(g, c, 2.0).value);
}

TEST_CASE("sur is invariant under grid isometries") {
  const auto g = euclidean_grid(17, 1.0);
  const RegionSpec region{g.origin(), 6.0};
  for (auto kind : {MapKind::Translations, MapKind::Rotations}) {
    for (const BiLipMap& f : map_suite(g, kind, region, 1.0)) {
      const Vertex q = *f.image(g.origin());
      const auto rep = sur_quasi_invariance(g, f, g.origin(), q, 1.0, 4.0);
      CHECK(rep.L == 1.0);
      CHECK(rep.lhs_ok);
      CHECK(rep.rhs_ok);
      CHECK(rep.lhs_ratio == 1.0);
      CHECK(rep.rhs_ratio == 1.0);
    }
  }
}

TEST_CASE("sur quasi-invariance under shears") {
  const auto g = euclidean_grid(41, 1.0);
  const RegionSpec region{g.origin(), 13.0};
  int checked = 0;
  for (const BiLipMap& f : map_suite(g, MapKind::Shears, region, 1.0)) {
    const Vertex q = *f.image(g.origin());
    const auto rep = sur_quasi_invariance(g, f, g.origin(), q, 1.0, 12.0);
    CHECK(rep.L <= 3.0);
    CHECK(rep.lhs_ok);
    CHECK(rep.rhs_ok);
    ++checked;
  }
  CHECK(checked > 0);
  const BiLipMap f = map_suite(g, MapKind::Shears, region, 0.0).front();
  const auto small = sur_quasi_invariance(g, f, g.origin(), g.origin(), 0.5, 12.0);
  CHECK(small.sur_inner == sur(g, g.origin(), 0.5 / f.constant(), 12.0 * f.constant()).value);
  CHECK(small.lhs_ok);
}

TEST_CASE("sur bound scan") {
  const auto g = euclidean_grid(33, 1.0);
  const auto scan = sur_bound_scan(g, {g.origin(), 3.0}, {1.0, 2.0, 4.0});
  CHECK(scan.pass);
  CHECK(scan.monotone);
  CHECK(scan.k_emp == 16.0);
  CHECK(scan.rows.size() == 25 * 3);

  const auto conformal = conformal_grid(33, 1.0, [](int x, int y) { return 1.0 + ((x * 7 + y * 3) % 5) / 2.0; }, 3.0);
  const auto cs = sur_bound_scan(conformal, {conformal.origin(), 3.0}, {1.0, 2.0, 4.0});
  CHECK(cs.pass);
  CHECK(cs.k_emp <= 3.0 * scan.k_emp);

  const auto t = sur_bound_scan(tree(2, 5, 1.0), {0, 2.0}, {1.0});
  CHECK_FALSE(t.pass);
  CHECK(t.failure.has_value());
}

TEST_CASE("surrounding constants") {
  const auto k = sur_constants(1.0);
  CHECK(k.C0 == 2.0);
  CHECK(k.C0 * k.C1 == 4.0);
  CHECK(k.C2 == 2.0 * k.C1);
  const auto k2 = sur_constants(2.0);
  CHECK(k2.C0 * k2.C1 == doctest::Approx(4.0));
  CHECK(k2.C2 == 2.0 * k2.C1);
  const auto g = euclidean_grid(21, 1.0);
  CHECK(sur_constants(g, {g.origin(), 5.0}).K == 1.0);
  CHECK_THROWS_AS(sur_constants(0.5), Error);
}

TEST_CASE("various bounds on the grid") {
  const auto g = euclidean_grid(7, 1.0);
  const Vertex c = g.origin();
  const auto rows = various_bounds_check(g, sur_constants(1.0), {{c, 1.0}, {c, 0.0}});
  REQUIRE(rows.size() == 2);
  const auto d = oracle::floyd(g);
  const SurResult s = sur(g, c, 1.0);
  double diam = 0.0;
  for (Vertex a : s.witness.waypoints)
    for (Vertex b : s.witness.waypoints) diam = std::max(diam, d[a][b]);
  CHECK(rows[0].diameter == diam);
  CHECK(rows[0].diameter >= 2.0);
  CHECK(rows[0].loop_length == 16.0);
  CHECK(rows[0].local_radius == 1.0);
  CHECK(rows[0].all());
  CHECK(rows[1].loop_length == 8.0);
  CHECK(rows[1].local_radius == 0.0);
  CHECK(rows[1].all());

  const auto big = euclidean_grid(25, 1.0);
  std::vector<VariousSample> samples;
  for (double r : {1.0, 2.0, 3.0, 5.0}) samples.push_back({big.origin(), r});
  for (const auto& row : various_bounds_check(big, sur_constants(1.0), samples)) CHECK(row.all());
}

TEST_CASE("loop length inside a ball uses partial edges") {
  const auto g = euclidean_grid(7, 1.0);
  const Loop unit = exterior_boundary(g, VertexSet{g.origin()});
  const Vertex corner = unit.waypoints.front();
  CHECK(loop_length_in_ball(g, unit, corner, 0.5) == 1.0);
  CHECK(loop_length_in_ball(g, unit, corner, 1.0) == 2.0);
  CHECK(loop_length_in_ball(g, unit, corner, 1.5) == 3.0);
  CHECK(loop_length_in_ball(g, unit, corner, 10.0) == 8.0);
}

TEST_CASE("layered cover") {
  const auto g = euclidean_grid(65, 1.0);
  const auto cover = layered_cover(g, g.origin(), 2.0, 3, 2.0);
  CHECK(cover.verified);
  CHECK(cover.layer_sizes.size() == 3);
  for (std::size_t i = 0; i < cover.layer_sizes.size(); ++i) CHECK(cover.layer_sizes[i] <= cover.layer_bounds[i]);
  CHECK(cover.centers.front() == g.origin());
  CHECK(cover.cover_radius == 4.0 * cover.loop_constant * 2.0);
  const auto d = *g.distances_from(g.origin());
  for (std::size_t i = 1; i < cover.centers.size(); ++i)
    for (std::size_t j = 0; j < i; ++j) CHECK(distance(g, cover.centers[i], cover.centers[j]) >= 2.0);

  const auto none = layered_cover(g, g.origin(), 2.0, 0, 2.0);
  CHECK(none.centers == std::vector<Vertex>{g.origin()});
  CHECK(none.verified);

  const auto small = euclidean_grid(9, 1.0);
  try {
    layered_cover(small, small.origin(), 1.0, 4, 1.0);
    FAIL("expected LayerEscapedRegion");
  } catch (const Error& e) {
    CHECK(e.code() == Errc::LayerEscapedRegion);
  }
}

TEST_CASE("contractibility constant") {
  const auto g = euclidean_grid(7, 1.0);
  const Vertex c = g.origin();
  const auto result = contractibility_constant(g, {{c, 1.0}, {c, 0.0}});
  const SurResult s = sur(g, c, 1.0);
  double reach = 0.0;
  for (Vertex v = 0; v < g.vertex_count(); ++v)
    if (!set_contains(make_vertex_set(s.witness.waypoints), v) &&
        oracle::inside_polygon(g, s.witness.waypoints, g.coordinates()[v]))
      reach = std::max(reach, distance(g, c, v));
  CHECK(result.rows[0].component_radius == reach);
  CHECK(result.rows[0].ratio <= 2.0);
  CHECK(result.rows[1].component_radius == 0.0);
  CHECK(result.rows[1].ratio == 0.0);
  CHECK(result.constant == result.rows[0].ratio);

  const auto big = euclidean_grid(21, 1.0);
  CHECK(std::isfinite(contractibility_constant(big, {{big.origin(), 5.0}}).constant));
}
