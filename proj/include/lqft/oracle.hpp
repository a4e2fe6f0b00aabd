#pragma once

// Non-perturbative check of the second-order reduced state: probe modes and a
// finite box field, linearly coupled, evolved exactly as a Gaussian system.
//
// Quadratures xi = (X_1..X_M, P_1..P_M), X = (a + a^dagger)/sqrt 2. With both fields
// expanded in Klein-Gordon normalized modes, phi_D = sum sqrt2 Phi_n X_n, and
//   H(t) = sum_j omega_j (X_j^2 + P_j^2)/2 + 2 lambda zeta(t) sum_{n,k} O_nk X_n Y_k,
// O_nk = int Phi_n Phi_k d^3x. Covariance sigma_ij = <{xi_i, xi_j}>/2; vacuum I/2.

#include "lqft/kernel.hpp"
#include "lqft/perturbation.hpp"
#include "lqft/smearing.hpp"

#include <Eigen/Dense>

#include <optional>
#include <string>
#include <vector>

namespace lqft {

struct ToyUniverse {
    ModeBasis probe;
    BoxFieldSpec field;
    ModeBasis field_basis;
    Eigen::MatrixXd overlap;  // probe x field
    Window window;
    double lambda = 0.0;
    std::size_t accessible = 0;  // index into probe.modes

    std::size_t probe_count() const { return probe.modes.size(); }
    std::size_t field_count() const { return field_basis.modes.size(); }
    std::size_t size() const { return probe_count() + field_count(); }
    /// g_nk(t) = lambda zeta(t) O_nk.
    double coupling(double t, std::size_t n, std::size_t k) const;
    std::vector<double> omegas() const;  // probe first, then field
    /// Same universe with every probe-field overlap zeroed except the accessible row.
    ToyUniverse isolated() const;
    /// Keep a subset of probe and field modes (for the Fock cross-check).
    ToyUniverse restricted(const std::vector<std::size_t>& probe_keep,
                           const std::vector<std::size_t>& field_keep) const;
    /// Perturbative coupling configuration of the accessible mode against this field.
    CouplingConfig coupling_config(const QuadratureControls& quad = {}) const;
};

/// Field box [origin, origin + box_d]^3. Throws invalid-geometry when any probe mode
/// carries more than 1e-10 of its norm outside the box.
ToyUniverse build_toy(const ModeBasis& probe_basis, double box_d, Vec3 box_origin, double field_m, int field_cap,
                      const Window& window, double lambda, std::size_t accessible = 0);

struct GaussianState {
    Eigen::MatrixXd covariance;
    Eigen::VectorXd mean;

    static GaussianState vacuum(std::size_t modes);
    std::size_t modes() const { return static_cast<std::size_t>(covariance.rows() / 2); }
};

struct EvolutionDiagnostics {
    double symplectic_defect = 0.0;  // max |S^T J S - J|
    double purity_drift = 0.0;       // |det(2 sigma) - det(2 sigma_0)|
    double uncertainty_min = 0.0;    // min eigenvalue of sigma + i J / 2
    double energy_drift = 0.0;       // relative change of <H(t)> between the ends
    std::size_t steps = 0;
};

struct Evolution {
    GaussianState schrodinger;
    GaussianState interaction;  // rotated back by the free propagator
    Eigen::MatrixXd propagator;
    EvolutionDiagnostics diagnostics;
};

/// Fourth-order Magnus integration of dS/dt = J H(t) S from t0 to t1. `initial` is taken in
/// the interaction picture at t0 (identical to the Schrodinger picture for stationary states).
Evolution evolve_exact(const ToyUniverse& toy, const GaussianState& initial, double t0, double t1,
                       std::size_t steps);

struct TracedMode {
    ReducedState state;
    double captured = 1.0;  // trace of the truncated block
    bool truncation_warning = false;
    double thermal_occupation = 0.0;
    double squeezing = 0.0;
};

/// Single-mode Gaussian state of mode `index` as a Fock density matrix, from the
/// thermal-squeezed decomposition rho = S(z) rho_th S(z)^dagger built in `work_dim` levels.
TracedMode trace_to_mode(const GaussianState& state, std::size_t index, int dim = 3, int work_dim = 40);

/// Dense Fock evolution of a system of at most 4 modes, levels 0..cutoff per mode, RK4.
/// Returns the accessible mode's interaction-picture state.
ReducedState fock_reference(const ToyUniverse& toy, double t0, double t1, std::size_t steps, int cutoff = 4,
                            int dim = 3);

/// O(lambda^2) change of P between field caps, bounded through the boxfield tail:
/// lambda^2 (int |zeta|)^2 (int |Phi_N| d^3x)^2 tail(cap).
double field_truncation_bound(const ToyUniverse& toy, double epsilon);

struct ToyScenario {
    ModeBasis probe;
    double box_d = 1.0;
    Vec3 box_origin{0.0, 0.0, 0.0};
    double field_m = 0.0;
    int field_cap = 3;
    Window window = gaussian_window(1.0);
    std::size_t accessible = 0;
    double t0 = -6.0;
    double t1 = 6.0;
    std::size_t steps = 4000;
    int dim = 3;
    QuadratureControls quad;
    bool isolate = false;
};

struct EquivalencePoint {
    double lambda = 0.0;
    double delta = 0.0;
    ReducedState exact;
    ReducedState perturbative;
    EvolutionDiagnostics diagnostics;
    bool truncation_warning = false;
};

struct EquivalenceReport {
    std::vector<EquivalencePoint> points;
    double exponent = 0.0;  // least-squares slope of log Delta against log lambda
    double delta_max = 0.0;  // Delta at the largest lambda
    bool invariants_ok = true;
    bool passed = false;
    std::string message;
};

/// Delta(lambda) = || trace_to_mode(evolve_exact) - reduced_state(lambda) ||_F for each lambda;
/// passes when the fitted exponent is >= 3.5, Delta(lambda_max) < 1e-3, and the integrator
/// invariants hold. Points run concurrently on up to `threads` threads.
EquivalenceReport verify_equivalence(const ToyScenario& scenario, const std::vector<double>& lambdas,
                                     unsigned threads = 1);

double fit_exponent(const std::vector<double>& x, const std::vector<double>& y);

} // namespace lqft
