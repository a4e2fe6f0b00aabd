#include "lqft/error.hpp"

namespace lqft {

const char* to_string(ErrorKind kind) noexcept {
    switch (kind) {
    case ErrorKind::invalid_parameter: return "invalid-parameter";
    case ErrorKind::resolution: return "resolution";
    case ErrorKind::confinement: return "confinement";
    case ErrorKind::invalid_geometry: return "invalid-geometry";
    case ErrorKind::domain: return "domain";
    case ErrorKind::consistency: return "consistency";
    case ErrorKind::schema: return "schema";
    case ErrorKind::integrator: return "integrator";
    }
    return "unknown";
}

} // namespace lqft
