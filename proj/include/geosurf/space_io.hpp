#pragma once

#include <iosfwd>
#include <string>

#include "geosurf/metric_surface.hpp"

namespace geosurf {

/// Space file: `vertices` ([{id, x, y}]), `edges` ([u, v, length]),
/// `rotation` (per-vertex counterclockwise neighbor ids), `outer_face`
/// ([u, v] darts with the outer face on their left), `origin`, and the
/// optional `family`, `grid` and `snowflake_theta` tags.
void write_space_json(std::ostream& out, const MetricSurface& space);
SpaceDescription read_space_description(std::istream& in);
MetricSurface read_space_json(std::istream& in);

void save_space(const std::string& path, const MetricSurface& space);
MetricSurface load_space(const std::string& path);

/// Loop as `{"length": L, "edges": [[u, v, length], ...]}`.
void write_loop_json(std::ostream& out, const MetricSurface& space, const Loop& loop);

}  // namespace geosurf
