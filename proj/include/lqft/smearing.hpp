#pragma once

// Interaction windows and the spacetime smearings Lambda^-(t, x) = zeta(t) e^{-i w_N t} Phi_N(x)
// built from one accessible mode. Windows are time-only; the spatial profile is the mode.

#include "lqft/spectrum.hpp"

#include <complex>
#include <span>
#include <string>
#include <utility>
#include <variant>

namespace lqft {

/// zeta(t) = exp(-pi t^2 / (2 T^2)).
struct GaussianTime {
    double T = 1.0;
};

/// Smooth bump on (t0, t1), peak 1 at the midpoint: exp(1 - 1/(1 - s^2)), s in (-1, 1).
struct CompactTime {
    double t0 = -1.0;
    double t1 = 1.0;
};

/// zeta = value everywhere. Only for stationarity tests; it has no Fourier transform.
struct ConstantTime {
    double value = 1.0;
};

struct Window {
    std::variant<GaussianTime, CompactTime, ConstantTime> kind;

    double operator()(double t) const;
    /// Holomorphic continuation; Gaussian and constant windows only.
    std::complex<double> operator()(std::complex<double> t) const;
    bool analytic() const;
    /// int zeta(t) e^{-i w t} dt.
    std::complex<double> fourier(double w) const;
    /// int zeta^2 dt.
    double square_integral() const;
    /// Interval carrying the window to below 1e-16 of its peak.
    std::pair<double, double> support() const;
    /// Characteristic duration: T, or t1 - t0 for a bump.
    double duration() const;
    /// Frequency beyond which |fourier(w)| < rel * |fourier(0)|.
    double frequency_cutoff(double rel) const;
    std::string name() const;
};

Window gaussian_window(double T);
Window compact_window(double t0, double t1);
Window constant_window(double value);

struct Smearing {
    Window window;
    Mode mode;
    double gap = 0.0;       // Omega = redshift * omega_N
    double redshift = 1.0;  // gamma
    Vec3 center{0.0, 0.0, 0.0};

    std::complex<double> lambda_minus(double t, std::span<const double> x) const;
    std::complex<double> lambda_plus(double t, std::span<const double> x) const;
    /// Static part Lambda(t, x) = zeta(t) Phi_N(x); Lambda^- = e^{-i Omega t} Lambda.
    double lambda_static(double t, std::span<const double> x) const;
};

Smearing build_lambda(const Window& window, const Mode& mode, double redshift = 1.0);

/// Phi~_N(k) = int d^3x Phi_N(x) e^{-i k.x}.
std::complex<double> spatial_fourier(const Smearing& smearing, std::span<const double> k);

/// True when |Phi~_N(k)| depends on |k| only (ground Hermite modes of equal width).
bool isotropic(const Mode& mode);

/// Spherical mean of |Phi~_N(k)|^2 over directions at fixed |k|.
double radial_power(const Mode& mode, double k);

/// |k| beyond which the radial power falls below rel times its peak (estimated).
double fourier_cutoff(const Mode& mode, double rel);

} // namespace lqft
