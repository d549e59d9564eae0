#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <functional>
#include <limits>
#include <random>
#include <vector>

#include "geosurf/generators.hpp"
#include "geosurf/metric_surface.hpp"

namespace oracle {

using geosurf::MetricSurface;
using geosurf::Vertex;

/// All-pairs base path lengths by Floyd-Warshall on the edge list.
inline std::vector<std::vector<double>> floyd(const MetricSurface& space) {
  const int n = space.vertex_count();
  const double inf = std::numeric_limits<double>::infinity();
  std::vector<std::vector<double>> d(n, std::vector<double>(n, inf));
  for (int v = 0; v < n; ++v) d[v][v] = 0.0;
  for (const auto& e : space.edges()) {
    d[e.u][e.v] = std::min(d[e.u][e.v], e.length);
    d[e.v][e.u] = std::min(d[e.v][e.u], e.length);
  }
  for (int k = 0; k < n; ++k)
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) d[i][j] = std::min(d[i][j], d[i][k] + d[k][j]);
  return d;
}

inline MetricSurface path_graph(int n, double len = 1.0) {
  geosurf::SpaceDescription spec;
  spec.vertex_count = n;
  spec.origin = 0;
  for (int i = 0; i + 1 < n; ++i) spec.edges.push_back({i, i + 1, len});
  return geosurf::build_space(spec);
}

inline MetricSurface cycle_graph(int n) {
  geosurf::SpaceDescription spec;
  spec.vertex_count = n;
  spec.origin = 0;
  for (int i = 0; i < n; ++i) spec.edges.push_back({i, (i + 1) % n, 1.0});
  return geosurf::build_space(spec);
}

/// Weighted grid with random diagonals and deleted interior edges, reconnected
/// where needed; straight-line planar on the integer grid points.
inline MetricSurface random_planar(int cols, int rows, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<int> weight(1, 4);
  std::uniform_real_distribution<double> coin(0.0, 1.0);
  std::vector<std::array<double, 2>> coords;
  for (int y = 0; y < rows; ++y)
    for (int x = 0; x < cols; ++x) coords.push_back({double(x), double(y)});
  auto id = [cols](int x, int y) { return y * cols + x; };
  std::vector<geosurf::EdgeSpec> edges;
  std::vector<geosurf::EdgeSpec> dropped;
  for (int y = 0; y < rows; ++y) {
    for (int x = 0; x < cols; ++x) {
      const bool boundary_row = y == 0 || y + 1 == rows;
      const bool boundary_col = x == 0 || x + 1 == cols;
      if (x + 1 < cols) {
        geosurf::EdgeSpec e{id(x, y), id(x + 1, y), double(weight(rng))};
        (boundary_row || coin(rng) > 0.15 ? edges : dropped).push_back(e);
      }
      if (y + 1 < rows) {
        geosurf::EdgeSpec e{id(x, y), id(x, y + 1), double(weight(rng))};
        (boundary_col || coin(rng) > 0.15 ? edges : dropped).push_back(e);
      }
      if (x + 1 < cols && y + 1 < rows && coin(rng) < 0.3) {
        if (coin(rng) < 0.5)
          edges.push_back({id(x, y), id(x + 1, y + 1), double(weight(rng))});
        else
          edges.push_back({id(x + 1, y), id(x, y + 1), double(weight(rng))});
      }
    }
  }
  std::vector<int> parent(cols * rows);
  for (int i = 0; i < cols * rows; ++i) parent[i] = i;
  auto find = [&](int v) {
    while (parent[v] != v) v = parent[v] = parent[parent[v]];
    return v;
  };
  for (const auto& e : edges) parent[find(e.u)] = find(e.v);
  for (const auto& e : dropped) {
    if (find(e.u) != find(e.v)) {
      parent[find(e.u)] = find(e.v);
      edges.push_back(e);
    }
  }
  return geosurf::straight_line_space(coords, edges, id(cols / 2, rows / 2));
}

/// Even-odd point-in-polygon test against a closed vertex walk.
inline bool inside_polygon(const MetricSurface& space, const std::vector<Vertex>& loop,
                           std::array<double, 2> p) {
  bool inside = false;
  const auto& c = space.coordinates();
  for (std::size_t i = 0, j = loop.size() - 1; i < loop.size(); j = i++) {
    const auto& a = c[loop[i]];
    const auto& b = c[loop[j]];
    if ((a[1] > p[1]) != (b[1] > p[1]) &&
        p[0] < (b[0] - a[0]) * (p[1] - a[1]) / (b[1] - a[1]) + a[0])
      inside = !inside;
  }
  return inside;
}

/// True iff the segment a-b crosses the ray from p with direction (1, 0.00314);
/// the slope keeps lattice points off the ray.
inline bool crosses_ray(std::array<double, 2> p, std::array<double, 2> a, std::array<double, 2> b) {
  const double slope = 0.00314;
  const double fa = (a[1] - p[1]) - slope * (a[0] - p[0]);
  const double fb = (b[1] - p[1]) - slope * (b[0] - p[0]);
  if ((fa > 0) == (fb > 0)) return false;
  const double t = fa / (fa - fb);
  return a[0] + t * (b[0] - a[0]) > p[0];
}

/// Minimum length of a simple cycle avoiding ball(p,r) (inside ball(p,R)
/// when R > 0) whose polygon contains p; exhaustive branch-and-bound over
/// simple cycles. A path is pruned when no walk back to its start with the
/// ray parity needed for an odd total beats the incumbent.
inline double enumerate_sur(const MetricSurface& g, Vertex p, double r, double R, double bound) {
  const auto d = oracle::floyd(g);
  const int n = g.vertex_count();
  const auto& xy = g.coordinates();
  const auto target = xy[p];
  std::vector<char> allowed(n, 0);
  for (Vertex v = 0; v < n; ++v) allowed[v] = d[p][v] > r + 1e-9 && (R <= 0 || d[p][v] <= R + 1e-9);
  struct Arc {
    Vertex to;
    double len;
    int cross;
  };
  std::vector<std::vector<Arc>> adj(n);
  for (const auto& e : g.edges()) {
    const int c = crosses_ray(target, xy[e.u], xy[e.v]) ? 1 : 0;
    adj[e.u].push_back({e.v, e.length, c});
    adj[e.v].push_back({e.u, e.length, c});
  }
  double best = bound + 1e-9;
  std::vector<Vertex> path;
  std::vector<char> on_path(n, 0);
  for (Vertex s = 0; s < n; ++s) {
    if (!allowed[s]) continue;
    // back[q][v]: shortest walk v -> s through allowed vertices with id >= s
    // and ray parity q.
    std::array<std::vector<double>, 2> back{std::vector<double>(n, 1e18), std::vector<double>(n, 1e18)};
    back[0][s] = 0;
    for (int round = 0; round < 2 * n; ++round) {
      bool changed = false;
      for (Vertex v = s; v < n; ++v) {
        if (!allowed[v]) continue;
        for (const Arc& a : adj[v]) {
          if (a.to < s || !allowed[a.to]) continue;
          for (int q = 0; q < 2; ++q) {
            if (back[q ^ a.cross][a.to] + a.len < back[q][v]) {
              back[q][v] = back[q ^ a.cross][a.to] + a.len;
              changed = true;
            }
          }
        }
      }
      if (!changed) break;
    }
    std::function<void(Vertex, double, int)> dfs = [&](Vertex v, double len, int parity) {
      for (const Arc& a : adj[v]) {
        const Vertex w = a.to;
        const int np = parity ^ a.cross;
        if (w == s && path.size() >= 3 && np == 1 && len + a.len < best && inside_polygon(g, path, target))
          best = len + a.len;
        if (w <= s || !allowed[w] || on_path[w] || len + a.len + back[np ^ 1][w] >= best) continue;
        on_path[w] = 1;
        path.push_back(w);
        dfs(w, len + a.len, np);
        path.pop_back();
        on_path[w] = 0;
      }
    };
    path = {s};
    on_path[s] = 1;
    dfs(s, 0.0, 0);
    on_path[s] = 0;
  }
  return best > bound + 1e-9 - 1e-12 ? std::numeric_limits<double>::infinity() : best;
}

}  // namespace oracle
