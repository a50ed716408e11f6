#pragma once

#include <string>
#include <vector>

#include "polyorb/analysis.hpp"
#include "polyorb/curve.hpp"
#include "polyorb/integrator.hpp"
#include "polyorb/polygon.hpp"

namespace polyorb::io {

/// 17-significant-digit decimal form (round-trip safe).
std::string format_double(double v);

std::string orbit_to_json(const PolygonOrbit& orbit);
PolygonOrbit orbit_from_json(const std::string& text);
std::string orbit_to_csv(const PolygonOrbit& orbit);
PolygonOrbit orbit_from_csv(const std::string& text);

std::string trajectory_to_json(const ImpulseTrajectory& trajectory);
ImpulseTrajectory trajectory_from_json(const std::string& text);
std::string trajectory_to_csv(const ImpulseTrajectory& trajectory);
/// Rebuilds the state series from CSV; dt is inferred from the time column.
ImpulseTrajectory trajectory_from_csv(const std::string& text);

std::string report_to_json(const ConvergenceReport& report);
ConvergenceReport report_from_json(const std::string& text);
std::string report_to_csv(const ConvergenceReport& report);

std::string bound_rows_to_json(const std::vector<std::size_t>& n_values,
                               const std::vector<BoundCheck>& rows);
std::string bound_rows_to_csv(const std::vector<std::size_t>& n_values,
                              const std::vector<BoundCheck>& rows);

/// Sampled-curve ingestion: header "u,x,y,z", >= 4 rows, strictly increasing u.
PlanarCurve read_curve_csv(const std::string& text);

std::string read_file(const std::string& path);
void write_file(const std::string& path, const std::string& content);

} // namespace polyorb::io
