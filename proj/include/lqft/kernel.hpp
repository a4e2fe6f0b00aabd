#pragma once

// Two-point functions of the free Klein-Gordon field in the 3+1 Minkowski vacuum,
// and of a free field in a Dirichlet box (the finite surrogate used by the oracle).
// The i-epsilon prescription is t -> t - i eps on the first argument.

#include "lqft/quadrature.hpp"
#include "lqft/spectrum.hpp"

#include <complex>
#include <functional>
#include <vector>

namespace lqft {

struct FieldSpec {
    double mass = 0.0;
    double epsilon = 1e-6;
};

struct Event {
    double t = 0.0;
    Vec3 x{0.0, 0.0, 0.0};
};

/// W(a, b) = <0| phi(a) phi(b) |0>. Massless: closed form. Massive: radial
/// momentum integral, truncated where e^{-omega eps} < 1e-15.
std::complex<double> wightman_vacuum(const FieldSpec& spec, const Event& a, const Event& b);

/// 1 / ((2 pi)^3 2 omega_k).
double momentum_density(const FieldSpec& spec, double k);

/// W(a, b) - W(b, a).
std::complex<double> commutator(const FieldSpec& spec, const Event& a, const Event& b);

/// Free field of mass `mass` in [origin, origin + d]^3 with modes 1..n_cap per axis.
/// `epsilon` may be zero here: the mode sum is finite.
struct BoxFieldSpec {
    double d = 1.0;
    double mass = 0.0;
    int n_cap = 3;
    Vec3 origin{0.0, 0.0, 0.0};
    double epsilon = 0.0;
};

struct TruncatedSum {
    std::complex<double> value;
    double tail_bound = 0.0;  // bound on the omitted modes; +inf when epsilon = 0
    std::size_t terms = 0;
};

/// sum_n e^{-i omega_n (dt - i eps)} Phi_n(x_a) Phi_n(x_b) over the capped box basis.
TruncatedSum boxfield_wightman(const BoxFieldSpec& spec, const Event& a, const Event& b);

/// Spectral representation of the field's two-point function smeared in space
/// against one real profile Phi: S(u) = int d^3x d^3x' Phi(x) Phi(x') W(u, x - x')
///                                    = int dmu(omega) e^{-i omega (u - i eps)}.
class SpectralMeasure {
public:
    /// dmu = dk 4 pi k^2 A(k) / ((2 pi)^3 2 omega_k) on [0, k_max], A the spherical
    /// mean of |Phi~(k)|^2. Nodes for S(u) resolve oscillation up to |Re u| <= u_max.
    static SpectralMeasure continuum(const FieldSpec& field, std::function<double(double)> radial_power,
                                     double k_max, double u_max, double tol);

    /// dmu = sum_j w_j delta(omega - omega_j).
    static SpectralMeasure discrete(std::vector<double> omegas, std::vector<double> weights,
                                    double epsilon);

    /// Requires Im u <= 0 (the continuation into the lower half plane converges).
    std::complex<double> smeared_wightman(std::complex<double> u) const;
    /// S(u0 + j step), j = 0 .. count-1, by phase recurrence. Every argument must
    /// satisfy Im u <= 0, i.e. step is real.
    std::vector<std::complex<double>> smeared_wightman_progression(std::complex<double> u0, double step,
                                                                   std::size_t count) const;

    /// int dmu f(omega) e^{-omega eps}; adaptive in k for the continuum.
    quad::Result<std::complex<double>> integrate(const std::function<std::complex<double>(double)>& f) const;

    bool is_discrete() const { return discrete_; }
    double epsilon() const { return epsilon_; }
    double total_weight() const;  // S(0) without regulator
    const std::vector<double>& omegas() const { return omegas_; }
    const std::vector<double>& weights() const { return weights_; }
    double node_error() const { return node_error_; }

private:
    bool discrete_ = true;
    double epsilon_ = 0.0;
    double mass_ = 0.0;
    double k_max_ = 0.0;
    double tol_ = 1e-12;
    std::function<double(double)> density_;  // continuum density in k
    std::vector<double> omegas_;             // nodes (continuum) or lines (discrete)
    std::vector<double> weights_;
    double node_error_ = 0.0;
};

/// Box-field measure seen by `mode`: lines at the field frequencies with weights
/// (int Phi_mode phi_k d^3x)^2.
SpectralMeasure box_field_measure(const BoxFieldSpec& spec, const Mode& mode);

/// Overlaps int Phi_mode phi_k d^3x against every box-field mode, in basis order.
std::vector<double> box_field_overlaps(const BoxFieldSpec& spec, const ModeBasis& field_basis,
                                       const Mode& mode);

} // namespace lqft
