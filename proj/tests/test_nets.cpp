#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <sstream>

#include "geosurf/nets.hpp"
#include "oracles.hpp"

using namespace geosurf;

namespace {

/// Smallest k such that some k vertices' closed r-balls cover target, by
/// enumerating center subsets of every size.
int brute_cover(const std::vector<std::vector<double>>& d, const VertexSet& target, double r) {
  const int n = static_cast<int>(d.size());
  for (int k = 1;; ++k) {
    std::vector<int> pick(k);
    std::function<bool(int, int)> rec = [&](int depth, int start) {
      if (depth == k) {
        for (Vertex t : target) {
          bool hit = false;
          for (int c : pick) hit = hit || d[c][t] <= r + 1e-9;
          if (!hit) return false;
        }
        return true;
      }
      for (int c = start; c < n; ++c) {
        pick[depth] = c;
        if (rec(depth + 1, c + 1)) return true;
      }
      return false;
    };
    if (rec(0, 0)) return k;
  }
}

/// Largest subset of target with pairwise distances > sep.
int brute_packing(const std::vector<std::vector<double>>& d, const VertexSet& target, double sep) {
  int best = 0;
  std::vector<Vertex> chosen;
  std::function<void(std::size_t)> rec = [&](std::size_t i) {
    best = std::max(best, static_cast<int>(chosen.size()));
    for (std::size_t j = i; j < target.size(); ++j) {
      bool ok = true;
      for (Vertex c : chosen) ok = ok && d[c][target[j]] > sep + 1e-9;
      if (!ok) continue;
      chosen.push_back(target[j]);
      rec(j + 1);
      chosen.pop_back();
    }
  };
  rec(0);
  return best;
}

/// Independent greedy sweep over a distance table.
std::size_t greedy_count(const std::vector<std::vector<double>>& d, const std::vector<Vertex>& order,
                         double eps) {
  std::vector<Vertex> members;
  for (Vertex v : order) {
    bool far = true;
    for (Vertex m : members) far = far && d[v][m] >= eps - 1e-9;
    if (far) members.push_back(v);
  }
  return members.size();
}

void check_net_invariants(const MetricSurface& space, const Net& net) {
  for (Vertex a : net.members)
    for (Vertex b : net.members)
      if (a != b) CHECK(distance(space, a, b) >= net.epsilon - 1e-9);
  for (Vertex v = 0; v < space.vertex_count(); ++v) {
    double nearest = 1e300;
    for (Vertex m : net.members) nearest = std::min(nearest, distance(space, v, m));
    CHECK(nearest < net.epsilon);
  }
}

}  // namespace

TEST_CASE("maximal_net greedy traces") {
  const auto p5 = oracle::path_graph(5);
  const auto forward = maximal_net(p5, 2.0, std::vector<Vertex>{0, 1, 2, 3, 4});
  CHECK(forward.members == VertexSet{0, 2, 4});
  CHECK(forward.order == std::vector<Vertex>{0, 2, 4});
  const auto backward = maximal_net(p5, 2.0, std::vector<Vertex>{4, 3, 2, 1, 0});
  CHECK(backward.members == VertexSet{0, 2, 4});
  CHECK(backward.order == std::vector<Vertex>{4, 2, 0});
  CHECK(maximal_net(p5, 0.5).members.size() == 5);
  CHECK_THROWS_AS(maximal_net(p5, 0.0), Error);
}

TEST_CASE("nets are separated and maximal") {
  for (const auto& space :
       {euclidean_grid(9, 1.0), oracle::random_planar(8, 8, 3), tree(3, 3, 1.0),
        conformal_grid(7, 1.0, [](int x, int) { return 1.0 + x / 7.0; }, 2.0)}) {
    for (double eps : {1.0, 2.0, 3.5}) {
      for (std::uint64_t seed : {0u, 1u, 2u}) check_net_invariants(space, maximal_net(space, eps, seed));
    }
  }
}

TEST_CASE("covering numbers") {
  const auto p9 = oracle::path_graph(9);
  const auto c = covering_number(p9, 4, 2.0, 1.0);
  CHECK(c.greedy == 3);
  CHECK(c.exact == 2);
  CHECK(brute_cover(oracle::floyd(p9), ball(p9, 4, 2.0), 1.0) == 2);

  CHECK(covering_number(p9, 4, 0.5, 0.25).greedy == 1);
  CHECK(covering_number(p9, 4, 0.5, 0.25).exact == 1);
  CHECK_THROWS_AS(covering_number(p9, 4, 1.0, 1.0), Error);

  const auto g = euclidean_grid(7, 1.0);
  const auto diamond = ball(g, g.origin(), 2.0);
  CHECK(diamond.size() == 13);
  const auto d = oracle::floyd(g);
  const int oracle_value = brute_cover(d, diamond, 1.0);
  CHECK(oracle_value == 4);
  const auto gc = covering_number(g, g.origin(), 2.0, 1.0);
  CHECK(gc.exact == oracle_value);
  CHECK(gc.greedy >= oracle_value);
}

TEST_CASE("covering dominates packing") {
  for (const auto& space : {euclidean_grid(7, 1.0), oracle::random_planar(6, 6, 9)}) {
    const auto d = oracle::floyd(space);
    for (Vertex p : {Vertex{8}, Vertex{17}, Vertex{24}}) {
      for (auto [R, r] : {std::pair{2.0, 1.0}, std::pair{3.0, 1.0}, std::pair{4.0, 2.0}}) {
        const auto target = ball(space, p, R);
        if (target.size() > kExactCoverLimit) continue;
        const auto cn = covering_number(space, p, R, r);
        REQUIRE(cn.exact.has_value());
        CHECK(*cn.exact == brute_cover(d, target, r));
        CHECK(*cn.exact >= brute_packing(d, target, 2 * r));
        CHECK(cn.greedy >= *cn.exact);
      }
    }
  }
}

TEST_CASE("net cardinality profile") {
  const auto g = euclidean_grid(17, 1.0);
  const auto region = ball(g, g.origin(), 8.0);
  const auto rows = net_cardinality_profile(g, {1.0, 2.0, 4.0}, region);
  REQUIRE(rows.size() == 3);
  CHECK(rows[0].cardinality == region.size());
  CHECK(rows[0].cardinality >= rows[1].cardinality);
  CHECK(rows[1].cardinality >= rows[2].cardinality);
  const auto d = oracle::floyd(g);
  const std::size_t oracle_two = greedy_count(d, std::vector<Vertex>(region.begin(), region.end()), 2.0);
  CHECK(oracle_two == 81);
  CHECK(rows[1].cardinality == oracle_two);
  CHECK(net_cardinality_profile(g, {40.0}, region)[0].cardinality == 1);

  std::ostringstream csv;
  write_profile_csv(csv, rows, "ball8");
  CHECK(csv.str().rfind("epsilon,seed,cardinality,region_id\n1,0,145,ball8\n", 0) == 0);
}

TEST_CASE("images of nets under certified maps") {
  const auto g = euclidean_grid(13, 1.0);
  const VertexSet dom = ball(g, g.origin(), 4.0);
  std::vector<Vertex> img;
  for (Vertex v : dom) {
    const auto [x, y] = grid_point(g, v);
    img.push_back(grid_vertex(g, x, y + static_cast<int>(std::floor((x - 6) / 2.0))));
  }
  const auto f = certify_bilip(g, dom, img);
  const double L = f.constant();
  CHECK(L > 1.0);
  for (double eps : {1.0, 2.0, 3.0}) {
    const auto net = maximal_net(g, eps, seeded_order(dom, 7));
    std::vector<Vertex> fn;
    for (Vertex m : net.members) fn.push_back(*f.image(m));
    for (Vertex a : fn)
      for (Vertex b : fn)
        if (a != b) CHECK(distance(g, a, b) >= eps / L - 1e-9);
    for (Vertex w : f.images()) {
      double nearest = 1e300;
      for (Vertex m : fn) nearest = std::min(nearest, distance(g, w, m));
      CHECK(nearest <= L * eps + 1e-9);
    }
  }
}
