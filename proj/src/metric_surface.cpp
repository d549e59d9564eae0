#include "geosurf/metric_surface.hpp"

#include <cmath>
#include <deque>
#include <limits>
#include <mutex>
#include <queue>
#include <random>
#include <unordered_map>

namespace geosurf {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

using HeapEntry = std::pair<double, Vertex>;
using MinHeap = std::priority_queue<HeapEntry, std::vector<HeapEntry>, std::greater<>>;

std::vector<double> base_sssp(const MetricSurface& space, Vertex source) {
  std::vector<double> dist(space.vertex_count(), kInf);
  MinHeap heap;
  dist[source] = 0.0;
  heap.emplace(0.0, source);
  while (!heap.empty()) {
    auto [d, v] = heap.top();
    heap.pop();
    if (d > dist[v]) continue;
    for (const Neighbor& nb : space.neighbors(v)) {
      const double nd = d + nb.length;
      if (nd < dist[nb.to]) {
        dist[nb.to] = nd;
        heap.emplace(nd, nb.to);
      }
    }
  }
  return dist;
}

}  // namespace

class DistanceCache {
 public:
  explicit DistanceCache(std::size_t capacity) : capacity_(capacity) {}

  std::shared_ptr<const std::vector<double>> find(Vertex v) {
    std::lock_guard lock(mutex_);
    auto it = entries_.find(v);
    return it == entries_.end() ? nullptr : it->second;
  }

  void insert(Vertex v, std::shared_ptr<const std::vector<double>> row) {
    std::lock_guard lock(mutex_);
    if (entries_.count(v)) return;
    if (entries_.size() >= capacity_) {
      entries_.erase(order_.front());
      order_.pop_front();
    }
    entries_.emplace(v, std::move(row));
    order_.push_back(v);
  }

 private:
  std::mutex mutex_;
  std::size_t capacity_;
  std::unordered_map<Vertex, std::shared_ptr<const std::vector<double>>> entries_;
  std::deque<Vertex> order_;
};

std::string to_string(Family family) {
  switch (family) {
    case Family::Custom: return "custom";
    case Family::EuclideanGrid: return "euclidean_grid";
    case Family::ConformalGrid: return "conformal_grid";
    case Family::HyperbolicGrid: return "hyperbolic_grid";
    case Family::Tree: return "tree";
    case Family::SnowflakeGrid: return "snowflake_grid";
  }
  return "custom";
}

Family family_from_string(const std::string& name) {
  for (Family f : {Family::Custom, Family::EuclideanGrid, Family::ConformalGrid,
                   Family::HyperbolicGrid, Family::Tree, Family::SnowflakeGrid}) {
    if (to_string(f) == name) return f;
  }
  fail(Errc::BadParameters, "unknown family '" + name + "'");
}

struct EmbeddingBuilder {
  static std::shared_ptr<const Embedding> build(const SpaceDescription& spec,
                                                const MetricSurface& space) {
    const auto& rotation = *spec.rotation;
    const Vertex n = space.vertex_count();
    const auto& edges = space.edges();
    require(static_cast<Vertex>(rotation.size()) == n, Errc::InvalidEmbedding,
            "rotation system must list every vertex");
    auto emb = std::make_shared<Embedding>();
    const int darts = 2 * static_cast<int>(edges.size());
    emb->rot_offset_.assign(n + 1, 0);
    emb->rot_index_.assign(darts, -1);
    for (Vertex v = 0; v < n; ++v) {
      const auto& order = rotation[v];
      require(order.size() == space.neighbors(v).size(), Errc::InvalidEmbedding,
              "rotation at vertex " + std::to_string(v) + " does not match its degree");
      emb->rot_offset_[v + 1] = emb->rot_offset_[v] + static_cast<int>(order.size());
      for (std::size_t i = 0; i < order.size(); ++i) {
        const Vertex w = order[i];
        const int e = space.contains(w) ? space.edge_between(v, w) : -1;
        require(e >= 0, Errc::InvalidEmbedding,
                "rotation at vertex " + std::to_string(v) + " names a non-neighbor");
        const int dart = edges[e].u == v ? 2 * e : 2 * e + 1;
        require(emb->rot_index_[dart] < 0, Errc::InvalidEmbedding,
                "rotation at vertex " + std::to_string(v) + " repeats a neighbor");
        emb->rot_index_[dart] = static_cast<int>(i);
        emb->rot_darts_.push_back(dart);
      }
    }
    emb->face_next_.resize(darts);
    for (int d = 0; d < darts; ++d) {
      const int twin = d ^ 1;
      const Vertex head = (d & 1) ? edges[d / 2].u : edges[d / 2].v;
      const auto around = emb->rotation(head);
      const int deg = static_cast<int>(around.size());
      const int i = emb->rot_index_[twin];
      emb->face_next_[d] = around[(i - 1 + deg) % deg];
    }
    emb->dart_face_.assign(darts, -1);
    for (int d = 0; d < darts; ++d) {
      if (emb->dart_face_[d] >= 0) continue;
      const int face = static_cast<int>(emb->face_darts_.size());
      emb->face_darts_.emplace_back();
      int cur = d;
      do {
        emb->dart_face_[cur] = face;
        emb->face_darts_.back().push_back(cur);
        cur = emb->face_next_[cur];
      } while (cur != d);
    }
    const long euler = static_cast<long>(n) - static_cast<long>(edges.size()) +
                       static_cast<long>(emb->face_darts_.size());
    require(euler == 2, Errc::InvalidEmbedding,
            "face tracing gives Euler characteristic " + std::to_string(euler) + ", expected 2");

    auto tail = [&](int d) { return (d & 1) ? edges[d / 2].v : edges[d / 2].u; };
    if (spec.outer_dart) {
      const auto [a, b] = *spec.outer_dart;
      const int e = space.contains(a) && space.contains(b) ? space.edge_between(a, b) : -1;
      require(e >= 0, Errc::InvalidEmbedding, "outer face dart is not an edge");
      emb->outer_face_ = emb->dart_face_[edges[e].u == a ? 2 * e : 2 * e + 1];
    } else if (!spec.coordinates.empty()) {
      double best = kInf;
      for (int f = 0; f < emb->face_count(); ++f) {
        double area = 0.0;
        for (int d : emb->face_darts_[f]) {
          const auto& p = spec.coordinates[tail(d)];
          const auto& q = spec.coordinates[tail(d ^ 1)];
          area += p[0] * q[1] - q[0] * p[1];
        }
        if (area < best) {
          best = area;
          emb->outer_face_ = f;
        }
      }
    } else {
      std::size_t longest = 0;
      for (int f = 0; f < emb->face_count(); ++f) {
        if (emb->face_darts_[f].size() > longest) {
          longest = emb->face_darts_[f].size();
          emb->outer_face_ = f;
        }
      }
    }
    emb->outer_vertex_.assign(n, 0);
    emb->vertex_faces_.assign(n, {});
    for (int d = 0; d < darts; ++d) {
      emb->vertex_faces_[tail(d)].push_back(emb->dart_face_[d]);
    }
    for (auto& faces : emb->vertex_faces_) {
      std::sort(faces.begin(), faces.end());
      faces.erase(std::unique(faces.begin(), faces.end()), faces.end());
    }
    for (int d : emb->face_darts_[emb->outer_face_]) emb->outer_vertex_[tail(d)] = 1;
    return emb;
  }
};

MetricSurface build_space(const SpaceDescription& spec) {
  const Vertex n = spec.vertex_count;
  require(n > 0, Errc::InvalidSpace, "space needs at least one vertex");
  require(spec.origin >= 0 && spec.origin < n, Errc::MissingOrigin,
          "origin " + std::to_string(spec.origin) + " is not a vertex");
  require(spec.coordinates.empty() || static_cast<Vertex>(spec.coordinates.size()) == n,
          Errc::InvalidSpace, "coordinates must be given for every vertex or none");
  if (spec.snowflake_theta) {
    const double t = *spec.snowflake_theta;
    require(t > 0.0 && t < 1.0, Errc::BadParameters, "snowflake exponent must lie in (0,1)");
  }

  MetricSurface space;
  space.edges_ = spec.edges;
  space.coordinates_ = spec.coordinates;
  space.origin_ = spec.origin;
  space.snowflake_theta_ = spec.snowflake_theta;
  space.grid_ = spec.grid;
  space.family_ = spec.family;

  std::vector<int> degree(n, 0);
  space.min_edge_ = spec.edges.empty() ? 0.0 : kInf;
  for (const EdgeSpec& e : spec.edges) {
    require(e.u >= 0 && e.u < n && e.v >= 0 && e.v < n, Errc::UnknownVertex,
            "edge endpoint out of range");
    require(e.u != e.v, Errc::InvalidSpace, "self-loop at vertex " + std::to_string(e.u));
    require(std::isfinite(e.length) && e.length > 0.0, Errc::NonPositiveEdge,
            "edge (" + std::to_string(e.u) + "," + std::to_string(e.v) + ") has length " +
                std::to_string(e.length));
    ++degree[e.u];
    ++degree[e.v];
    space.mesh_ = std::max(space.mesh_, e.length);
    space.min_edge_ = std::min(space.min_edge_, e.length);
  }
  space.adj_offset_.assign(n + 1, 0);
  for (Vertex v = 0; v < n; ++v) space.adj_offset_[v + 1] = space.adj_offset_[v] + degree[v];
  space.adj_.resize(space.adj_offset_[n]);
  std::vector<int> fill(space.adj_offset_.begin(), space.adj_offset_.end() - 1);
  for (int i = 0; i < static_cast<int>(spec.edges.size()); ++i) {
    const EdgeSpec& e = spec.edges[i];
    space.adj_[fill[e.u]++] = {e.v, e.length, i};
    space.adj_[fill[e.v]++] = {e.u, e.length, i};
  }
  for (Vertex v = 0; v < n; ++v) {
    auto first = space.adj_.begin() + space.adj_offset_[v];
    auto last = space.adj_.begin() + space.adj_offset_[v + 1];
    std::sort(first, last, [](const Neighbor& a, const Neighbor& b) { return a.to < b.to; });
    for (auto it = first; it + 1 < last; ++it) {
      require(it->to != (it + 1)->to, Errc::InvalidSpace,
              "duplicate edge between " + std::to_string(v) + " and " + std::to_string(it->to));
    }
  }

  std::vector<char> seen(n, 0);
  std::vector<Vertex> stack{0};
  seen[0] = 1;
  Vertex reached = 1;
  while (!stack.empty()) {
    const Vertex v = stack.back();
    stack.pop_back();
    for (const Neighbor& nb : space.neighbors(v)) {
      if (!seen[nb.to]) {
        seen[nb.to] = 1;
        ++reached;
        stack.push_back(nb.to);
      }
    }
  }
  require(reached == n, Errc::DisconnectedGraph,
          std::to_string(n - reached) + " vertices unreachable from vertex 0");

  if (spec.rotation && !spec.edges.empty()) {
    space.embedding_ = EmbeddingBuilder::build(spec, space);
  }
  const std::size_t budget = 50'000'000 / (sizeof(double) * static_cast<std::size_t>(n));
  space.cache_ = std::make_shared<DistanceCache>(std::max<std::size_t>(64, budget));
  return space;
}

int MetricSurface::edge_between(Vertex u, Vertex v) const {
  const auto nbs = neighbors(u);
  auto it = std::lower_bound(nbs.begin(), nbs.end(), v,
                             [](const Neighbor& a, Vertex b) { return a.to < b; });
  return it != nbs.end() && it->to == v ? it->edge : -1;
}

const Embedding& MetricSurface::embedding() const {
  require(embedding_ != nullptr, Errc::NoEmbedding, "space has no rotation system");
  return *embedding_;
}

void MetricSurface::check_vertex(Vertex v) const {
  require(contains(v), Errc::UnknownVertex, "vertex " + std::to_string(v) + " not in space");
}

double MetricSurface::metric_from_base(double base) const {
  return snowflake_theta_ ? std::pow(base, *snowflake_theta_) : base;
}

double MetricSurface::base_from_metric(double metric) const {
  return snowflake_theta_ ? std::pow(metric, 1.0 / *snowflake_theta_) : metric;
}

std::shared_ptr<const std::vector<double>> MetricSurface::distances_from(Vertex source) const {
  check_vertex(source);
  if (auto hit = cache_->find(source)) return hit;
  auto dist = base_sssp(*this, source);
  if (snowflake_theta_) {
    for (double& d : dist) d = std::pow(d, *snowflake_theta_);
  }
  auto row = std::make_shared<const std::vector<double>>(std::move(dist));
  cache_->insert(source, row);
  return row;
}

std::vector<std::pair<Vertex, double>> MetricSurface::reach(std::span<const Vertex> sources,
                                                            double r) const {
  const double bound = base_from_metric(r) * (1.0 + kTolerance) + kTolerance;
  std::unordered_map<Vertex, double> dist;
  MinHeap heap;
  for (Vertex s : sources) {
    check_vertex(s);
    dist[s] = 0.0;
    heap.emplace(0.0, s);
  }
  std::vector<std::pair<Vertex, double>> out;
  while (!heap.empty()) {
    auto [d, v] = heap.top();
    heap.pop();
    if (d > dist[v]) continue;
    const double metric = metric_from_base(d);
    if (!within_radius(metric, r)) continue;
    out.emplace_back(v, metric);
    for (const Neighbor& nb : neighbors(v)) {
      const double nd = d + nb.length;
      if (nd > bound) continue;
      auto it = dist.find(nb.to);
      if (it == dist.end() || nd < it->second) {
        dist[nb.to] = nd;
        heap.emplace(nd, nb.to);
      }
    }
  }
  return out;
}

std::vector<double> MetricSurface::distance_to_set(std::span<const Vertex> sources,
                                                   std::span<const Vertex> targets) const {
  std::vector<double> dist(vertex_count(), kInf);
  std::vector<char> wanted(vertex_count(), 0);
  std::size_t remaining = 0;
  for (Vertex t : targets) {
    check_vertex(t);
    if (!wanted[t]) {
      wanted[t] = 1;
      ++remaining;
    }
  }
  MinHeap heap;
  for (Vertex s : sources) {
    check_vertex(s);
    dist[s] = 0.0;
    heap.emplace(0.0, s);
  }
  while (!heap.empty() && remaining > 0) {
    auto [d, v] = heap.top();
    heap.pop();
    if (d > dist[v]) continue;
    if (wanted[v] == 1) {
      wanted[v] = 2;
      --remaining;
    }
    for (const Neighbor& nb : neighbors(v)) {
      const double nd = d + nb.length;
      if (nd < dist[nb.to]) {
        dist[nb.to] = nd;
        heap.emplace(nd, nb.to);
      }
    }
  }
  std::vector<double> out;
  out.reserve(targets.size());
  for (Vertex t : targets) out.push_back(metric_from_base(dist[t]));
  return out;
}

BiLipMap::BiLipMap(VertexSet domain, std::vector<Vertex> images, double constant, bool exact,
                   std::size_t pairs_checked)
    : domain_(std::move(domain)),
      images_(std::move(images)),
      constant_(constant),
      exact_(exact),
      pairs_checked_(pairs_checked) {
  inverse_.reserve(domain_.size());
  for (std::size_t i = 0; i < domain_.size(); ++i) inverse_.emplace_back(images_[i], domain_[i]);
  std::sort(inverse_.begin(), inverse_.end());
}

std::optional<Vertex> BiLipMap::image(Vertex v) const {
  auto it = std::lower_bound(domain_.begin(), domain_.end(), v);
  if (it == domain_.end() || *it != v) return std::nullopt;
  return images_[it - domain_.begin()];
}

std::optional<Vertex> BiLipMap::preimage(Vertex w) const {
  auto it = std::lower_bound(inverse_.begin(), inverse_.end(), std::make_pair(w, Vertex{-1}));
  if (it == inverse_.end() || it->first != w) return std::nullopt;
  return it->second;
}

bool BiLipMap::in_domain(Vertex v) const {
  return std::binary_search(domain_.begin(), domain_.end(), v);
}

double distance(const MetricSurface& space, Vertex p, Vertex q) {
  space.check_vertex(q);
  return (*space.distances_from(p))[q];
}

void require_geodesic(const MetricSurface& space, const char* operation) {
  require(space.geodesic(), Errc::NonGeodesicSpace,
          std::string(operation) + " requires a geodesic space; this space carries a "
                                   "snowflake metric override");
}

Geodesic geodesic(const MetricSurface& space, Vertex p, Vertex q) {
  space.check_vertex(p);
  space.check_vertex(q);
  require_geodesic(space, "geodesic");
  const auto to_q = space.distances_from(q);
  Geodesic g;
  g.waypoints.push_back(p);
  Vertex cur = p;
  while (cur != q) {
    Vertex next = -1;
    double step = 0.0;
    for (const Neighbor& nb : space.neighbors(cur)) {
      if (nb.to >= next && next >= 0) break;  // neighbors are sorted by id
      if (nearly_equal((*to_q)[cur], nb.length + (*to_q)[nb.to])) {
        next = nb.to;
        step = nb.length;
      }
    }
    require(next >= 0, Errc::InvalidSpace, "geodesic reconstruction failed");
    g.length += step;
    g.waypoints.push_back(next);
    cur = next;
  }
  return g;
}

VertexSet ball(const MetricSurface& space, Vertex p, double r) {
  space.check_vertex(p);
  require(r >= 0.0, Errc::NegativeRadius, "ball radius must be nonnegative");
  const Vertex src[] = {p};
  VertexSet out;
  for (const auto& [v, d] : space.reach(src, r)) out.push_back(v);
  std::sort(out.begin(), out.end());
  return out;
}

VertexSet ball(const MetricSurface& space, const RegionSpec& region) {
  return ball(space, region.center, region.radius);
}

void validate_region(const MetricSurface& space, const RegionSpec& region) {
  space.check_vertex(region.center);
  require(region.radius > 0.0, Errc::BadRegion, "region radius must be positive");
  require(static_cast<Vertex>(ball(space, region).size()) < space.vertex_count(), Errc::BadRegion,
          "region ball must leave a margin to the space boundary");
}

double walk_length(const MetricSurface& space, std::span<const Vertex> waypoints, bool closed) {
  double total = 0.0;
  const std::size_t k = waypoints.size();
  for (Vertex v : waypoints) {
    require(space.contains(v), Errc::InvalidCurve, "waypoint outside the space");
  }
  if (k < 2) return 0.0;
  const std::size_t steps = closed ? k : k - 1;
  for (std::size_t i = 0; i < steps; ++i) {
    const Vertex a = waypoints[i];
    const Vertex b = waypoints[(i + 1) % k];
    const int e = space.edge_between(a, b);
    require(e >= 0, Errc::InvalidCurve,
            "consecutive waypoints " + std::to_string(a) + "," + std::to_string(b) +
                " share no edge");
    total += space.edges()[e].length;
  }
  return total;
}

Loop make_loop(const MetricSurface& space, std::vector<Vertex> waypoints) {
  Loop loop;
  loop.length = walk_length(space, waypoints, true);
  std::vector<Vertex> sorted = waypoints;
  std::sort(sorted.begin(), sorted.end());
  loop.simple = std::adjacent_find(sorted.begin(), sorted.end()) == sorted.end();
  loop.waypoints = std::move(waypoints);
  return loop;
}

Loop exterior_boundary(const MetricSurface& space, std::span<const Vertex> ball_set) {
  const Embedding& emb = space.embedding();
  require(!ball_set.empty(), Errc::BadParameters, "ball set is empty");
  const auto& edges = space.edges();
  std::vector<char> inside_face(emb.face_count(), 0);
  for (Vertex v : ball_set) {
    space.check_vertex(v);
    require(!emb.on_outer_face(v), Errc::BallTouchesOuterFace,
            "vertex " + std::to_string(v) + " lies on the outer face");
    for (int f : emb.faces_at(v)) inside_face[f] = 1;
  }
  // Faces reachable from the outer face without entering a face that touches
  // the set form the unbounded complementary region.
  std::vector<char> exterior(emb.face_count(), 0);
  std::vector<int> stack{emb.outer_face()};
  exterior[emb.outer_face()] = 1;
  while (!stack.empty()) {
    const int f = stack.back();
    stack.pop_back();
    for (int d : emb.face_darts(f)) {
      const int g = emb.left_face(d ^ 1);
      if (!exterior[g] && !inside_face[g]) {
        exterior[g] = 1;
        stack.push_back(g);
      }
    }
  }
  auto boundary_dart = [&](int d) { return !exterior[emb.left_face(d)] && exterior[emb.left_face(d ^ 1)]; };
  int start = -1;
  for (int d = 0; d < 2 * static_cast<int>(edges.size()); ++d) {
    if (boundary_dart(d)) {
      start = d;
      break;
    }
  }
  require(start >= 0, Errc::BallTouchesOuterFace, "no exterior region around the set");
  auto tail = [&](int d) { return (d & 1) ? edges[d / 2].v : edges[d / 2].u; };
  std::vector<Vertex> walk;
  int cur = start;
  do {
    walk.push_back(tail(cur));
    int next = emb.face_next(cur);
    while (!boundary_dart(next)) next = emb.face_next(next ^ 1);
    cur = next;
  } while (cur != start);
  return make_loop(space, std::move(walk));
}

BiLipMap certify_bilip(const MetricSurface& space, std::span<const Vertex> domain,
                       std::span<const Vertex> images, std::uint64_t sample_seed,
                       std::size_t sample_pairs) {
  require(!domain.empty(), Errc::EmptyDomain, "biLipschitz domain is empty");
  require(domain.size() == images.size(), Errc::BadParameters,
          "domain and image lists differ in length");
  std::vector<std::pair<Vertex, Vertex>> pairs;
  for (std::size_t i = 0; i < domain.size(); ++i) {
    space.check_vertex(domain[i]);
    space.check_vertex(images[i]);
    pairs.emplace_back(domain[i], images[i]);
  }
  std::sort(pairs.begin(), pairs.end());
  for (std::size_t i = 1; i < pairs.size(); ++i) {
    require(pairs[i].first != pairs[i - 1].first, Errc::BadParameters,
            "domain lists vertex " + std::to_string(pairs[i].first) + " twice");
  }
  std::vector<Vertex> sorted_images;
  for (const auto& pr : pairs) sorted_images.push_back(pr.second);
  std::sort(sorted_images.begin(), sorted_images.end());
  require(std::adjacent_find(sorted_images.begin(), sorted_images.end()) == sorted_images.end(),
          Errc::NotInjective, "assignment maps two domain vertices to one image");

  VertexSet dom;
  std::vector<Vertex> img;
  for (const auto& pr : pairs) {
    dom.push_back(pr.first);
    img.push_back(pr.second);
  }
  const std::size_t k = dom.size();
  auto ratio = [](double a, double b) { return std::max(a / b, b / a); };
  double constant = 1.0;
  if (k <= kExactCertificationLimit) {
    std::size_t checked = 0;
    for (std::size_t i = 0; i < k; ++i) {
      const auto dx = space.distances_from(dom[i]);
      const auto dfx = space.distances_from(img[i]);
      for (std::size_t j = i + 1; j < k; ++j) {
        constant = std::max(constant, ratio((*dx)[dom[j]], (*dfx)[img[j]]));
        ++checked;
      }
    }
    return BiLipMap(std::move(dom), std::move(img), constant, true, checked);
  }
  std::mt19937_64 rng(sample_seed);
  std::uniform_int_distribution<std::size_t> pick(0, k - 1);
  std::size_t checked = 0;
  while (checked < sample_pairs) {
    const std::size_t i = pick(rng);
    const std::size_t j = pick(rng);
    if (i == j) continue;
    constant = std::max(constant, ratio(distance(space, dom[i], dom[j]),
                                        distance(space, img[i], img[j])));
    ++checked;
  }
  return BiLipMap(std::move(dom), std::move(img), constant, false, checked);
}

double set_diameter(const MetricSurface& space, std::span<const Vertex> vertices) {
  double diam = 0.0;
  for (Vertex v : vertices) {
    const auto row = space.distances_from(v);
    for (Vertex w : vertices) diam = std::max(diam, (*row)[w]);
  }
  return diam;
}

bool is_acyclic(const MetricSurface& space) {
  return space.edge_count() == space.vertex_count() - 1;
}

VertexSet make_vertex_set(std::vector<Vertex> vertices) {
  std::sort(vertices.begin(), vertices.end());
  vertices.erase(std::unique(vertices.begin(), vertices.end()), vertices.end());
  return vertices;
}

bool set_contains(const VertexSet& set, Vertex v) {
  return std::binary_search(set.begin(), set.end(), v);
}

}  // namespace geosurf
