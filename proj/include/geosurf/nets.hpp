#pragma once

#include <cstdint>
#include <optional>
#include <ostream>
#include <vector>

#include "geosurf/metric_surface.hpp"

namespace geosurf {

/// Maximal epsilon-separated set of the swept vertices.
struct Net {
  double epsilon = 0.0;
  VertexSet members;
  std::vector<Vertex> order;  // members in admission order
  std::uint64_t seed = 0;
};

/// Vertex order for a seed: seed 0 is ascending id, other seeds shuffle.
std::vector<Vertex> seeded_order(std::span<const Vertex> vertices, std::uint64_t seed);
std::vector<Vertex> seeded_order(const MetricSurface& space, std::uint64_t seed);

/// Greedy sweep admitting a vertex iff it is at distance >= epsilon from all
/// admitted ones.
Net maximal_net(const MetricSurface& space, double epsilon, std::span<const Vertex> order,
                std::uint64_t seed = 0);
Net maximal_net(const MetricSurface& space, double epsilon, std::uint64_t seed = 0);

struct CoveringNumber {
  int greedy = 0;
  std::optional<int> exact;
};

inline constexpr std::size_t kExactCoverLimit = 20;

/// Greedy cover of ball(p,R) by closed r-balls centered at an r-separated
/// (strictly) subset; exact minimum over all centers when the ball is small.
CoveringNumber covering_number(const MetricSurface& space, Vertex p, double R, double r);

/// Minimum number of closed r-balls (centers anywhere) covering `target`.
int exact_cover(const MetricSurface& space, const VertexSet& target, double r);

struct ProfileRow {
  double epsilon = 0.0;
  std::uint64_t seed = 0;
  std::size_t cardinality = 0;
};

/// c_eps = size of a maximal eps-net of the region, one row per epsilon.
std::vector<ProfileRow> net_cardinality_profile(const MetricSurface& space,
                                                const std::vector<double>& epsilons,
                                                const VertexSet& region, std::uint64_t seed = 0);

void write_profile_csv(std::ostream& out, const std::vector<ProfileRow>& rows,
                       const std::string& region_id);

}  // namespace geosurf
