#pragma once

// Second-order reduced state of the accessible mode, two ways:
//  * matrix elements P and rho_20 evaluated from their closed integral forms, by a
//    direct (t, t') quadrature and by a momentum-space reduction;
//  * the Unruh-DeWitt oscillator state assembled from the Dyson operator algebra.

#include "lqft/kernel.hpp"
#include "lqft/smearing.hpp"

#include <Eigen/Dense>

#include <complex>
#include <iosfwd>
#include <optional>
#include <string>
#include <utility>
#include <variant>
#include <vector>

namespace lqft {

struct QuadratureControls {
    double abs_tol = 1e-8;   // on lambda^2-scaled matrix elements
    double rel_tol = 1e-10;  // on the raw double integrals
    double t_range = 0.0;    // half-span of the time grid; 0 = window support
    double k_max = 0.0;      // continuum momentum cutoff; 0 = from the mode's Fourier decay
    std::size_t time_panels = 0;  // initial panel count; 0 = automatic
    std::size_t time_order = 16;
    int max_refinements = 3;
};

using FieldModel = std::variant<FieldSpec, BoxFieldSpec>;

struct CouplingConfig {
    double lambda = 0.0;
    Smearing smearing;
    FieldModel field = FieldSpec{};
    QuadratureControls quad;
};

struct PathValue {
    std::complex<double> value;
    double error = 0.0;
};

struct ResponsePoint {
    double Omega = 0.0;
    double P = 0.0;
    double err = 0.0;
    std::complex<double> C20;
    double err_C20 = 0.0;
    double P_direct = 0.0;
    double P_momentum = 0.0;
    double path_delta = 0.0;  // |P_direct - P_momentum| / |P|, 0 when P = 0
    bool consistent = true;
    double cauchy_schwarz = 0.0;  // sqrt(2 P (1 - P)), a diagnostic ceiling on |C20|
    bool perturbative = true;     // lambda^2 * response scale < 0.1
    std::string failure;          // non-empty when the point could not be evaluated
};

/// Spectral measure of the field as seen through the accessible mode's profile.
SpectralMeasure field_measure(const CouplingConfig& cfg);

/// Time interval integrated over for cfg.
std::pair<double, double> time_interval(const CouplingConfig& cfg);

enum class Ordering { full, later_first };

/// int dt dt' zeta(t) zeta(t') e^{-i a t} e^{-i b t'} S(sigma (t - t')) [theta(t - t')]
/// on nested composite Gauss-Legendre panels, refined by doubling. Gaussian windows
/// are integrated on contours shifted into the complex plane where the phases
/// stop oscillating; theta-ordered integrals only admit a common shift.
PathValue pair_integral(const CouplingConfig& cfg, const SpectralMeasure& mu, double a, double b, int sigma,
                        Ordering ordering);

PathValue excitation_probability_direct(const CouplingConfig& cfg);
PathValue excitation_probability_momentum(const CouplingConfig& cfg);
/// Both paths plus the cross-check; never throws on disagreement (see `consistent`).
ResponsePoint evaluate_point(const CouplingConfig& cfg);
/// Throws consistency when the paths disagree beyond 10x their combined tolerance.
double excitation_probability(const CouplingConfig& cfg);

PathValue coherence_02_direct(const CouplingConfig& cfg);
/// Closed form in the Dawson function; Gaussian windows only.
std::optional<PathValue> coherence_02_momentum(const CouplingConfig& cfg);
/// rho_20: momentum path when available, else direct.
PathValue coherence_02(const CouplingConfig& cfg);
/// rho_02 from its own (mirrored) time ordering. Equals conj(rho_20).
PathValue coherence_02_mirrored(const CouplingConfig& cfg);

struct ReducedState {
    int dim = 3;
    Eigen::MatrixXcd rho;
    int order = 2;
    double tolerance = 1e-8;

    double trace_defect() const;           // |tr rho - 1|
    double hermiticity_residual() const;  // max |rho - rho^dagger|
    Eigen::VectorXd eigenvalues() const;  // of the Hermitian part, ascending
    double min_eigenvalue() const;
    bool valid() const;  // Hermitian and unit trace to 1e-12, eigenvalues >= -10 tol
};

ReducedState vacuum_state(int dim);
ReducedState reduced_state(const CouplingConfig& cfg, int dim = 3);
/// Dyson expansion of the oscillator detector with monopole Lambda e^{-i Omega t} a + h.c.
/// acting on rho0 (default vacuum), truncated at `dim` levels.
ReducedState udw_reduced_state(const CouplingConfig& cfg, int dim = 3,
                               const std::optional<Eigen::MatrixXcd>& rho0 = std::nullopt);
double frobenius_distance(const ReducedState& a, const ReducedState& b);

enum class ThetaMode { symbolic, grid, triangular };

struct SpuriousResidual {
    double residual = 0.0;  // lambda^2 |int int K (1 - theta(u) - theta(-u))|, max over modes
    double scale = 0.0;     // lambda^2 |int int K|, same mode
};

/// Would-be contribution of traced-out modes that the theta identity removes.
/// `grid_points` sets the uniform t grid of ThetaMode::grid.
SpuriousResidual spurious_term_residual(const CouplingConfig& cfg, const std::vector<Mode>& other_modes,
                                        ThetaMode mode, std::size_t grid_points = 200);

/// One point per gap, evaluated concurrently and returned in input order.
std::vector<ResponsePoint> response_curve(const CouplingConfig& base, const std::vector<double>& gaps,
                                          unsigned threads = 1);

/// Omega,T,ell,lambda,P,err_P,Re_C20,Im_C20,path_delta
void write_response_csv(std::ostream& out, const CouplingConfig& base, const std::vector<ResponsePoint>& points,
                        bool header = true);

/// Length scale reported in the ell column: the probe width or the box side.
double probe_length(const Mode& mode);

} // namespace lqft
