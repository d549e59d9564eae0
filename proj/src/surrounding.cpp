#include "geosurf/surrounding.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <mutex>
#include <queue>

#include "geosurf/generators.hpp"
#include "geosurf/nets.hpp"
#include "geosurf/parallel.hpp"

namespace geosurf {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

Vertex dart_tail(const MetricSurface& space, int dart) {
  const EdgeSpec& e = space.edges()[dart / 2];
  return (dart & 1) ? e.v : e.u;
}

std::vector<int> loop_edges(const MetricSurface& space, const Loop& loop) {
  std::vector<int> out;
  const std::size_t k = loop.waypoints.size();
  if (k < 2) return out;
  for (std::size_t i = 0; i < k; ++i) {
    const int e = space.edge_between(loop.waypoints[i], loop.waypoints[(i + 1) % k]);
    require(e >= 0, Errc::InvalidCurve, "loop waypoints do not share an edge");
    out.push_back(e);
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

/// Radial-graph flood from the given vertices. Nodes are vertices (ids) and
/// faces (ids offset by the vertex count). Returns the visit mask.
std::vector<char> radial_flood(const MetricSurface& space, const Loop& loop,
                               std::span<const Vertex> starts) {
  const Embedding& emb = space.embedding();
  const int n = space.vertex_count();
  std::vector<char> on_loop(n, 0);
  for (Vertex v : loop.waypoints) {
    space.check_vertex(v);
    on_loop[v] = 1;
  }
  std::vector<char> loop_edge(space.edge_count(), 0);
  for (int e : loop_edges(space, loop)) loop_edge[e] = 1;
  std::vector<char> seen(n + emb.face_count(), 0);
  std::vector<int> stack;
  for (Vertex v : starts) {
    space.check_vertex(v);
    require(!on_loop[v], Errc::LoopMeetsTarget, "loop passes through vertex " + std::to_string(v));
    if (!seen[v]) {
      seen[v] = 1;
      stack.push_back(v);
    }
  }
  auto push = [&](int node) {
    if (!seen[node]) {
      seen[node] = 1;
      stack.push_back(node);
    }
  };
  while (!stack.empty()) {
    const int node = stack.back();
    stack.pop_back();
    if (node < n) {
      for (int f : emb.faces_at(node)) push(n + f);
      continue;
    }
    for (int d : emb.face_darts(node - n)) {
      const Vertex v = dart_tail(space, d);
      if (!on_loop[v]) push(v);
      if (!loop_edge[d / 2]) push(n + emb.left_face(d ^ 1));
    }
  }
  return seen;
}

/// Edge parity of a dual path from a face at p to the outer face.
std::vector<char> cut_parity(const MetricSurface& space, Vertex p) {
  const Embedding& emb = space.embedding();
  std::vector<int> via(emb.face_count(), -2);
  std::queue<int> queue;
  for (int f : emb.faces_at(p)) {
    if (via[f] == -2) {
      via[f] = -1;
      queue.push(f);
    }
  }
  while (!queue.empty() && via[emb.outer_face()] == -2) {
    const int f = queue.front();
    queue.pop();
    for (int d : emb.face_darts(f)) {
      const int g = emb.left_face(d ^ 1);
      if (via[g] == -2) {
        via[g] = d;
        queue.push(g);
      }
    }
  }
  require(via[emb.outer_face()] != -2, Errc::InvalidEmbedding, "outer face unreachable in the dual");
  std::vector<char> parity(space.edge_count(), 0);
  for (int f = emb.outer_face(); via[f] >= 0; f = emb.left_face(via[f])) parity[via[f] / 2] ^= 1;
  return parity;
}

int walk_parity(const MetricSurface& space, const std::vector<Vertex>& w,
                const std::vector<char>& parity) {
  int total = 0;
  for (std::size_t i = 0; i < w.size(); ++i) total ^= parity[space.edge_between(w[i], w[(i + 1) % w.size()])];
  return total;
}

/// Splits a closed walk at repeated vertices, keeping the odd piece.
std::vector<Vertex> odd_simple_piece(const MetricSurface& space, std::vector<Vertex> w,
                                     const std::vector<char>& parity) {
  for (;;) {
    std::size_t i = 0;
    std::size_t j = 0;
    bool found = false;
    for (i = 0; i < w.size() && !found; ++i) {
      for (j = i + 1; j < w.size(); ++j) {
        if (w[i] == w[j]) {
          found = true;
          break;
        }
      }
    }
    if (!found) return w;
    --i;
    std::vector<Vertex> inner(w.begin() + i, w.begin() + j);
    std::vector<Vertex> outer(w.begin(), w.begin() + i);
    outer.insert(outer.end(), w.begin() + j, w.end());
    w = (inner.size() >= 2 && walk_parity(space, inner, parity)) ? inner : outer;
  }
}

std::vector<Vertex> canonical(std::vector<Vertex> w) {
  if (w.empty()) return w;
  std::rotate(w.begin(), std::min_element(w.begin(), w.end()), w.end());
  if (w.size() > 2 && w.back() < w[1]) std::reverse(w.begin() + 1, w.end());
  return w;
}

struct Candidate {
  double length = kInf;
  std::vector<Vertex> walk;
};

bool better(const Candidate& a, const Candidate& b) {
  if (!nearly_equal(a.length, b.length)) return a.length < b.length;
  return a.walk < b.walk;
}

/// Shortest walk from (s, even) to (s, odd) in the double cover of the
/// allowed subgraph, abandoned once distances exceed `bound`.
Candidate odd_loop_through(const MetricSurface& space, Vertex s, const std::vector<char>& allowed,
                           const std::vector<char>& parity, double bound, std::vector<double>& dist,
                           std::vector<int>& pred, std::vector<int>& touched) {
  for (int st : touched) {
    dist[st] = kInf;
    pred[st] = -1;
  }
  touched.clear();
  using Item = std::pair<double, int>;
  std::priority_queue<Item, std::vector<Item>, std::greater<>> heap;
  const int start = 2 * s;
  const int goal = 2 * s + 1;
  dist[start] = 0.0;
  touched.push_back(start);
  heap.push({0.0, start});
  const double limit = bound + kTolerance * std::max(1.0, bound);
  while (!heap.empty()) {
    const auto [d, st] = heap.top();
    heap.pop();
    if (d > dist[st]) continue;
    if (d > limit) break;
    if (st == goal) break;
    const Vertex v = st / 2;
    const int par = st & 1;
    for (const Neighbor& nb : space.neighbors(v)) {
      if (!allowed[nb.to]) continue;
      const int next = 2 * nb.to + (par ^ parity[nb.edge]);
      const double nd = d + nb.length;
      if (nd < dist[next]) {
        if (dist[next] == kInf) touched.push_back(next);
        dist[next] = nd;
        pred[next] = st;
        heap.push({nd, next});
      }
    }
  }
  Candidate out;
  if (!(dist[goal] <= limit)) return out;
  std::vector<Vertex> walk;
  for (int st = goal; st != start; st = pred[st]) walk.push_back(st / 2);
  std::reverse(walk.begin(), walk.end());
  walk.pop_back();
  walk.insert(walk.begin(), s);
  out.walk = canonical(odd_simple_piece(space, std::move(walk), parity));
  out.length = walk_length(space, out.walk, true);
  return out;
}

double max_distance(const MetricSurface& space, Vertex p, std::span<const Vertex> vs) {
  const auto from_p = space.distances_from(p);
  double out = 0.0;
  for (Vertex v : vs) out = std::max(out, (*from_p)[v]);
  return out;
}

}  // namespace

SurConstants sur_constants(double K) {
  require(K >= 1.0, Errc::BadParameters, "cutting constant must be at least 1");
  return {K, 2.0 / (K * K), 2.0 * K * K, 4.0 * K * K};
}

SurConstants sur_constants(const MetricSurface& space, const RegionSpec& region) {
  return sur_constants(cutting_family(space, region).constant);
}

bool surrounds(const MetricSurface& space, const Loop& loop, std::span<const Vertex> target) {
  const auto seen = radial_flood(space, loop, target);
  return !seen[space.vertex_count() + space.embedding().outer_face()];
}

std::vector<VertexSet> bounded_components(const MetricSurface& space, const Loop& loop) {
  const int n = space.vertex_count();
  std::vector<char> on_loop(n, 0);
  for (Vertex v : loop.waypoints) on_loop[v] = 1;
  std::vector<char> done(n, 0);
  std::vector<VertexSet> out;
  for (Vertex v = 0; v < n; ++v) {
    if (on_loop[v] || done[v]) continue;
    const Vertex start[] = {v};
    const auto seen = radial_flood(space, loop, start);
    VertexSet component;
    for (Vertex w = 0; w < n; ++w) {
      if (seen[w]) {
        component.push_back(w);
        done[w] = 1;
      }
    }
    if (!seen[n + space.embedding().outer_face()]) out.push_back(std::move(component));
  }
  return out;
}

VertexSet enclosed_component(const MetricSurface& space, const Loop& loop, Vertex p) {
  const Vertex start[] = {p};
  const auto seen = radial_flood(space, loop, start);
  VertexSet out;
  for (Vertex v = 0; v < space.vertex_count(); ++v) {
    if (seen[v]) out.push_back(v);
  }
  return out;
}

SurResult sur(const MetricSurface& space, Vertex p, double r, std::optional<double> local_radius) {
  require_geodesic(space, "sur");
  space.check_vertex(p);
  require(r >= 0.0, Errc::NegativeRadius, "radius must be nonnegative");
  if (local_radius) {
    require(*local_radius > r, Errc::BadParameters, "local radius must exceed r");
  }
  require(!is_acyclic(space), Errc::NoSurroundingLoop, "the space has no cycles");
  const Embedding& emb = space.embedding();
  const VertexSet target = ball(space, p, r);
  for (Vertex v : target) {
    require(!emb.on_outer_face(v), Errc::NoSurroundingLoop,
            "ball(" + std::to_string(p) + ", " + std::to_string(r) + ") touches the outer face");
  }
  const int n = space.vertex_count();
  std::vector<char> allowed(n, local_radius ? 0 : 1);
  if (local_radius) {
    for (Vertex v : ball(space, p, *local_radius)) allowed[v] = 1;
  }
  for (Vertex v : target) allowed[v] = 0;

  const auto parity = cut_parity(space, p);
  double bound = kInf;
  try {
    const Loop outline = exterior_boundary(space, target);
    if (std::all_of(outline.waypoints.begin(), outline.waypoints.end(),
                    [&](Vertex v) { return allowed[v] != 0; })) {
      bound = outline.length;
    }
  } catch (const Error&) {
  }

  std::vector<Vertex> sources;
  for (int e = 0; e < space.edge_count(); ++e) {
    const EdgeSpec& edge = space.edges()[e];
    if (parity[e] && allowed[edge.u] && allowed[edge.v]) {
      sources.push_back(edge.u);
      sources.push_back(edge.v);
    }
  }
  std::sort(sources.begin(), sources.end());
  sources.erase(std::unique(sources.begin(), sources.end()), sources.end());
  const auto from_p = space.distances_from(p);
  std::stable_sort(sources.begin(), sources.end(),
                   [&](Vertex a, Vertex b) { return (*from_p)[a] < (*from_p)[b]; });

  std::vector<double> dist(2 * n, kInf);
  std::vector<int> pred(2 * n, -1);
  std::vector<int> touched;
  Candidate best;
  best.length = bound;
  bool found = false;
  for (Vertex s : sources) {
    Candidate c = odd_loop_through(space, s, allowed, parity, best.length, dist, pred, touched);
    if (c.walk.empty()) continue;
    if (!found || better(c, best)) {
      best = std::move(c);
      found = true;
    }
  }
  require(found, Errc::NoSurroundingLoop,
          "no loop surrounds ball(" + std::to_string(p) + ", " + std::to_string(r) + ")" +
              (local_radius ? " inside the local radius" : ""));
  SurResult out;
  out.p = p;
  out.r = r;
  out.witness = make_loop(space, best.walk);
  out.value = out.witness.length;
  out.local_radius = local_radius;
  return out;
}

SurQuasiInvariance sur_quasi_invariance(const MetricSurface& space, const BiLipMap& f, Vertex p,
                                           Vertex p_image, double r, double R) {
  const auto image = f.image(p);
  require(image && *image == p_image, Errc::BadParameters, "the map does not send p to p'");
  for (Vertex v : ball(space, p, R)) {
    require(f.in_domain(v), Errc::BadParameters, "ball(p, R) leaves the map domain");
  }
  SurQuasiInvariance out;
  out.L = f.constant();
  const double L = out.L;
  out.sur_pr = sur(space, p, r, R).value;
  out.sur_inner = sur(space, p_image, r / L, L * R).value;
  out.sur_outer = sur(space, p_image, L * r, R / L).value;
  const double slack = kTolerance * std::max(1.0, out.sur_pr);
  out.lhs_ok = out.sur_inner / L <= out.sur_pr + slack;
  out.rhs_ok = out.sur_pr <= L * out.sur_outer + slack;
  out.lhs_ratio = out.sur_pr / (out.sur_inner / L);
  out.rhs_ratio = L * out.sur_outer / out.sur_pr;
  return out;
}

SurBoundScan sur_bound_scan(const MetricSurface& space, const RegionSpec& region,
                            const std::vector<double>& radii) {
  require(!radii.empty(), Errc::BadRadii, "no radii given");
  for (double r : radii) require(r > 0.0, Errc::BadRadii, "radii must be positive");
  std::vector<double> sorted = radii;
  std::sort(sorted.begin(), sorted.end());
  const VertexSet points = ball(space, region);
  SurBoundScan out;
  out.rows.resize(points.size() * sorted.size());
  std::mutex failure_mutex;
  parallel_for(points.size(), [&](std::size_t i) {
    for (std::size_t j = 0; j < sorted.size(); ++j) {
      SurScanRow& row = out.rows[i * sorted.size() + j];
      row.p = points[i];
      row.r = sorted[j];
      try {
        row.value = sur(space, points[i], sorted[j]).value;
      } catch (const Error& e) {
        if (e.code() != Errc::NoSurroundingLoop) throw;
        std::lock_guard lock(failure_mutex);
        if (!out.failure) out.failure = e.what();
        row.value = kInf;
      }
    }
  });
  for (std::size_t k = 0; k < out.rows.size(); ++k) {
    const SurScanRow& row = out.rows[k];
    out.k_emp = std::max(out.k_emp, row.value / row.r);
    if (k % sorted.size() != 0 && row.value < out.rows[k - 1].value - kTolerance * row.value) {
      out.monotone = false;
    }
  }
  out.pass = !out.failure && std::isfinite(out.k_emp);
  return out;
}

double loop_length_in_ball(const MetricSurface& space, const Loop& loop, Vertex center,
                           double radius) {
  const auto from = space.distances_from(center);
  double total = 0.0;
  for (int e : loop_edges(space, loop)) {
    const EdgeSpec& edge = space.edges()[e];
    const double a = std::max(0.0, radius - (*from)[edge.u]);
    const double b = std::max(0.0, radius - (*from)[edge.v]);
    total += std::min(edge.length, a + b);
  }
  return total;
}

std::vector<VariousRow> various_bounds_check(const MetricSurface& space, const SurConstants& constants,
                                             const std::vector<VariousSample>& samples) {
  std::vector<VariousRow> rows(samples.size());
  parallel_for(samples.size(), [&](std::size_t i) {
    const auto [p, r] = samples[i];
    const SurResult s = sur(space, p, r);
    const Loop& g = s.witness;
    VariousRow& row = rows[i];
    row.p = p;
    row.r = r;
    row.loop_length = s.value;
    row.diameter = set_diameter(space, g.waypoints);
    row.local_radius = constants.C0 * r / 2.0;
    row.min_local_length = kInf;
    for (Vertex q : g.waypoints) {
      row.min_local_length = std::min(row.min_local_length, loop_length_in_ball(space, g, q, row.local_radius));
    }
    row.loop_reach = max_distance(space, p, g.waypoints);
    const VertexSet inside = enclosed_component(space, g, p);
    row.component_reach = max_distance(space, p, inside);
    const double slack = kTolerance * std::max(1.0, s.value);
    row.diameter_ok = row.diameter >= constants.C0 * r - slack;
    row.length_ok = s.value >= constants.C0 * r - slack;
    row.local_length_ok = row.min_local_length >= row.local_radius - slack;
    row.loop_contained = row.loop_reach <= constants.C1 * s.value + slack;
    row.component_contained = row.component_reach <= constants.C2 * s.value + slack;
  });
  return rows;
}

LayeredCover layered_cover(const MetricSurface& space, Vertex p, double r, int k,
                           double net_separation, const SurConstants& constants) {
  space.check_vertex(p);
  require(k >= 0, Errc::BadParameters, "layer count must be nonnegative");
  require(r > 0.0, Errc::BadRadii, "radius must be positive");
  require(net_separation > 0.0, Errc::BadEpsilon, "net separation must be positive");
  LayeredCover out;
  out.centers.push_back(p);
  std::vector<Vertex> frontier{p};
  for (int layer = 0; layer < k; ++layer) {
    std::vector<SurResult> loops(frontier.size());
    parallel_for(frontier.size(), [&](std::size_t i) {
      try {
        loops[i] = sur(space, frontier[i], r);
      } catch (const Error& e) {
        if (e.code() != Errc::NoSurroundingLoop) throw;
        fail(Errc::LayerEscapedRegion, "layer " + std::to_string(layer + 1) + ": " + e.what());
      }
    });
    std::vector<Vertex> on_loops;
    double bound = 0.0;
    for (const SurResult& s : loops) {
      out.loop_constant = std::max(out.loop_constant, s.value / r);
      on_loops.insert(on_loops.end(), s.witness.waypoints.begin(), s.witness.waypoints.end());
      bound += s.value / net_separation + 1.0;
    }
    std::vector<Vertex> order = out.centers;
    const VertexSet loop_set = make_vertex_set(std::move(on_loops));
    order.insert(order.end(), loop_set.begin(), loop_set.end());
    const Net net = maximal_net(space, net_separation, order);
    frontier.assign(net.order.begin() + static_cast<std::ptrdiff_t>(out.centers.size()), net.order.end());
    out.centers.insert(out.centers.end(), frontier.begin(), frontier.end());
    out.layer_sizes.push_back(frontier.size());
    out.layer_bounds.push_back(bound);
  }
  out.cover_radius = constants.C2 * out.loop_constant * r;
  std::vector<char> covered(space.vertex_count(), 0);
  for (const auto& [v, d] : space.reach(out.centers, out.cover_radius)) covered[v] = 1;
  const VertexSet target = ball(space, p, k * r / 2.0);
  out.verified = std::all_of(target.begin(), target.end(), [&](Vertex v) { return covered[v] != 0; });
  return out;
}

Contractibility contractibility_constant(const MetricSurface& space,
                                         const std::vector<VariousSample>& samples) {
  Contractibility out;
  out.rows.resize(samples.size());
  parallel_for(samples.size(), [&](std::size_t i) {
    const auto [p, r] = samples[i];
    const SurResult s = sur(space, p, r);
    ContractibilityRow& row = out.rows[i];
    row.p = p;
    row.r = r;
    row.component_radius = max_distance(space, p, enclosed_component(space, s.witness, p));
    row.ratio = r > 0.0 ? row.component_radius / r : 0.0;
  });
  for (const auto& row : out.rows) out.constant = std::max(out.constant, row.ratio);
  return out;
}

}  // namespace geosurf
