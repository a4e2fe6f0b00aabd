#pragma once

// Scenario files: one JSON document describing the potential, field, window, coupling
// list, sweep and numerical controls. Every object rejects keys it does not know.
// Lengths and times are in units of the window duration T (T = 1 by convention).

#include "lqft/oracle.hpp"
#include "lqft/perturbation.hpp"

#include "json.hpp"

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

namespace lqft {

struct OracleSettings {
    double t0 = -6.0;
    double t1 = 6.0;
    std::size_t steps = 4000;
    int dim = 3;
    bool isolate = false;
};

struct Scenario {
    ModeBasis basis;
    FieldModel field = FieldSpec{};
    Window window = gaussian_window(1.0);
    std::optional<ModeIndex> accessible;  // default: lowest mode
    double redshift = 1.0;
    std::vector<double> lambdas;
    std::vector<double> gaps;  // explicit sweep, possibly empty
    bool gaps_from_spectrum = false;
    QuadratureControls quad;
    OracleSettings oracle;
    int dim = 3;
    std::string output;  // empty: fall back to --out / environment
    std::size_t profile_points = 201;

    const Mode& accessible_mode() const;
    std::size_t accessible_position() const;
    /// Coupling configuration at lambdas[i] (0 when the list is empty).
    CouplingConfig coupling(std::size_t i = 0) const;
    /// Sweep gaps: explicit list, or the redshifted basis frequencies.
    std::vector<double> sweep() const;
    ToyScenario toy() const;
};

/// Parses and validates; relative CSV paths resolve against `base_dir`. Malformed
/// input throws ErrorKind::schema.
Scenario parse_scenario(const nlohmann::json& doc, const std::filesystem::path& base_dir = ".");
Scenario load_scenario(const std::filesystem::path& path);

} // namespace lqft
