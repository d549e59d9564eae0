#include "geosurf/nets.hpp"

#include <cmath>
#include <functional>
#include <iomanip>
#include <random>
#include <unordered_map>

namespace geosurf {

std::vector<Vertex> seeded_order(std::span<const Vertex> vertices, std::uint64_t seed) {
  std::vector<Vertex> order(vertices.begin(), vertices.end());
  std::sort(order.begin(), order.end());
  if (seed != 0) {
    std::mt19937_64 rng(seed);
    std::shuffle(order.begin(), order.end(), rng);
  }
  return order;
}

std::vector<Vertex> seeded_order(const MetricSurface& space, std::uint64_t seed) {
  std::vector<Vertex> all(space.vertex_count());
  for (Vertex v = 0; v < space.vertex_count(); ++v) all[v] = v;
  return seeded_order(all, seed);
}

Net maximal_net(const MetricSurface& space, double epsilon, std::span<const Vertex> order,
                std::uint64_t seed) {
  require(std::isfinite(epsilon) && epsilon > 0.0, Errc::BadEpsilon, "epsilon must be positive");
  Net net;
  net.epsilon = epsilon;
  net.seed = seed;
  std::vector<char> covered(space.vertex_count(), 0);
  const double strict = epsilon - kTolerance * std::max(1.0, epsilon);
  for (Vertex v : order) {
    space.check_vertex(v);
    if (covered[v]) continue;
    net.order.push_back(v);
    const Vertex src[] = {v};
    for (const auto& [w, d] : space.reach(src, epsilon)) {
      if (d < strict) covered[w] = 1;
    }
  }
  net.members = make_vertex_set(net.order);
  return net;
}

Net maximal_net(const MetricSurface& space, double epsilon, std::uint64_t seed) {
  const auto order = seeded_order(space, seed);
  return maximal_net(space, epsilon, order, seed);
}

int exact_cover(const MetricSurface& space, const VertexSet& target, double r) {
  require(target.size() <= 64, Errc::BadParameters, "exact cover supports at most 64 targets");
  if (target.empty()) return 0;
  std::unordered_map<Vertex, std::uint64_t> reach_mask;
  for (std::size_t i = 0; i < target.size(); ++i) {
    const Vertex src[] = {target[i]};
    for (const auto& [c, d] : space.reach(src, r)) reach_mask[c] |= std::uint64_t{1} << i;
  }
  std::vector<std::uint64_t> masks;
  for (const auto& [c, m] : reach_mask) masks.push_back(m);
  std::sort(masks.begin(), masks.end(), std::greater<>());
  masks.erase(std::unique(masks.begin(), masks.end()), masks.end());
  std::vector<std::uint64_t> maximal;
  for (std::uint64_t m : masks) {
    const bool dominated = std::any_of(masks.begin(), masks.end(),
                                       [m](std::uint64_t o) { return o != m && (o & m) == m; });
    if (!dominated) maximal.push_back(m);
  }
  const std::uint64_t full =
      target.size() == 64 ? ~std::uint64_t{0} : (std::uint64_t{1} << target.size()) - 1;
  int best = static_cast<int>(target.size());
  std::function<void(std::uint64_t, int)> search = [&](std::uint64_t covered, int used) {
    if (covered == full) {
      best = std::min(best, used);
      return;
    }
    if (used + 1 >= best) return;
    const std::uint64_t bit = ~covered & (covered + 1);
    for (std::uint64_t m : maximal) {
      if (m & bit) search(covered | m, used + 1);
    }
  };
  search(0, 0);
  return best;
}

CoveringNumber covering_number(const MetricSurface& space, Vertex p, double R, double r) {
  require(r > 0.0 && r < R, Errc::BadRadii, "covering radii must satisfy 0 < r < R");
  const VertexSet target = ball(space, p, R);
  CoveringNumber out;
  std::vector<char> covered(space.vertex_count(), 0);
  for (Vertex v : target) {
    if (covered[v]) continue;
    ++out.greedy;
    const Vertex src[] = {v};
    for (const auto& [w, d] : space.reach(src, r)) covered[w] = 1;
  }
  if (target.size() <= kExactCoverLimit) out.exact = exact_cover(space, target, r);
  return out;
}

std::vector<ProfileRow> net_cardinality_profile(const MetricSurface& space,
                                                const std::vector<double>& epsilons,
                                                const VertexSet& region, std::uint64_t seed) {
  require(!region.empty(), Errc::BadParameters, "profile region is empty");
  for (double eps : epsilons) {
    require(std::isfinite(eps) && eps > 0.0, Errc::BadEpsilon, "epsilons must be positive");
  }
  const auto order = seeded_order(region, seed);
  std::vector<ProfileRow> rows;
  for (double eps : epsilons) {
    rows.push_back({eps, seed, maximal_net(space, eps, order, seed).members.size()});
  }
  return rows;
}

void write_profile_csv(std::ostream& out, const std::vector<ProfileRow>& rows,
                       const std::string& region_id) {
  out << "epsilon,seed,cardinality,region_id\n";
  for (const auto& row : rows) {
    out << std::setprecision(17) << row.epsilon << ',' << row.seed << ',' << row.cardinality << ','
        << region_id << '\n';
  }
}

}  // namespace geosurf
