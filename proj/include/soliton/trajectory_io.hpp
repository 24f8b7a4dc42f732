#pragma once

#include "soliton/explorer.hpp"
#include "soliton/geometry_residuals.hpp"
#include "soliton/ode_core.hpp"
#include "soliton/types.hpp"

#include <iosfwd>
#include <string>

namespace soliton::io {

/// Trajectory CSV: header "t,x,xd,y,yd,phi,phid", full double precision
/// (17 significant digits, so write/read round-trips bit-exactly).
void write_trajectory_csv(std::ostream& os, const Trajectory& traj);
void write_trajectory_csv(const std::string& path, const Trajectory& traj);

/// CSV carries no metadata; the caller supplies the params (and the branch
/// defaults to external). Throws malformed_input_error on schema violations.
Trajectory read_trajectory_csv(std::istream& is, const Params& params);
Trajectory read_trajectory_csv(const std::string& path, const Params& params);

/// JSON form: {"metadata": {m, k, branch, a, t_start, t_end, ...}, "samples":
/// [[t,x,xd,y,yd,phi,phid], ...]}. `extra` merges additional metadata fields
/// (family parameters, residuals, the run configuration).
void write_trajectory_json(std::ostream& os, const Trajectory& traj,
                           const std::string& extra_json = "{}");
void write_trajectory_json(const std::string& path, const Trajectory& traj,
                           const std::string& extra_json = "{}");

Trajectory read_trajectory_json(std::istream& is);
Trajectory read_trajectory_json(const std::string& path);

/// Reads either format, keying on the first non-space byte ('{' means JSON).
/// fallback_params apply to CSV input only.
Trajectory read_trajectory_any(const std::string& path, const Params& fallback_params);

void write_residual_csv(std::ostream& os, const ResidualReport& rep);
void write_geometric_csv(std::ostream& os, const std::vector<GeometricSample>& rows);
void write_soliton_residual_csv(std::ostream& os, const std::vector<SolitonResidualSample>& rows);
void write_radial_csv(std::ostream& os, const std::vector<RadialSample>& rows);
void write_scan_csv(std::ostream& os, const ScanGrid& grid);

} // namespace soliton::io
