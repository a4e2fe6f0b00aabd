#pragma once

// File formats: tabulated potentials (CSV in), mode tables and states (JSON out),
// profile samples (CSV out). Output files are written atomically.

#include "lqft/oracle.hpp"
#include "lqft/perturbation.hpp"
#include "lqft/spectrum.hpp"

#include "json.hpp"

#include <filesystem>
#include <string>

namespace lqft::io {

using nlohmann::json;

/// Two columns x, V; an optional non-numeric header line is skipped.
Tabulated1D read_potential_csv(const std::filesystem::path& path, bool hard_walls = false);
/// Four columns x, lapse, metric, V.
StaticCurved1D read_curved_csv(const std::filesystem::path& path, bool hard_walls = false);

/// Write via a sibling temporary file and rename.
void write_atomic(const std::filesystem::path& path, const std::string& content);

json modes_json(const ModeBasis& basis);
/// Samples of every mode along a line (1D bases: the grid axis; 3D: the x axis through
/// the first mode's center).
std::string profiles_csv(const ModeBasis& basis, std::size_t points = 201);

json state_json(const ReducedState& state);
json point_json(const ResponsePoint& point);
json report_json(const EquivalenceReport& report);

} // namespace lqft::io
