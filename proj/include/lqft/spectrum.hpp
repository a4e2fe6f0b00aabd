#pragma once

// Mode bases of a scalar field confined by an external potential.
//
// Every basis is separable: a mode is a product of one-dimensional axis profiles,
// each L2-normalized on its own axis, times the Klein-Gordon prefactor
// (2 omega)^{-1/2}. Hence int |Phi_n|^2 = 1 / (2 omega_n) for every returned mode.

#include <array>
#include <complex>
#include <memory>
#include <span>
#include <string>
#include <variant>
#include <vector>

namespace lqft {

using Vec3 = std::array<double, 3>;

/// sqrt(2/L) sin(n pi (x - origin) / L) on [origin, origin + L], zero elsewhere.
struct SineAxis {
    double length = 1.0;
    int n = 1;
    double origin = 0.0;
};

/// Hermite-Gaussian psi_n((x - center)/ell) / sqrt(ell).
struct HermiteAxis {
    double ell = 1.0;
    int n = 0;
    double center = 0.0;
};

/// Uniform grid with a per-node measure weight (1 in flat space, sqrt(h)/beta on a
/// static curved slice). Endpoint values are zero (Dirichlet).
struct Grid1D {
    std::vector<double> x;
    std::vector<double> weight;
    double spacing = 0.0;
};

/// Sampled profile, normalized so that sum_i spacing * weight_i * value_i^2 = 1.
struct GridAxis {
    std::shared_ptr<const Grid1D> grid;
    std::vector<double> values;
};

using AxisProfile = std::variant<SineAxis, HermiteAxis, GridAxis>;

double evaluate(const AxisProfile& profile, double x);
/// int f(x) e^{-i k x} dx.
std::complex<double> fourier(const AxisProfile& profile, double k);
/// |f|^2-weighted mean position.
double centroid(const AxisProfile& profile);
/// Interval outside of which the profile is negligible (< 1e-16 of its L2 mass).
std::pair<double, double> effective_support(const AxisProfile& profile);
/// int f_a f_b dx by quadrature (the weighted discrete inner product for two
/// profiles on the same grid).
double axis_overlap(const AxisProfile& a, const AxisProfile& b);

using ModeIndex = std::vector<int>;

std::string format_index(const ModeIndex& index);

struct Mode {
    ModeIndex index;
    double omega = 0.0;
    std::vector<AxisProfile> axes;

    std::size_t dimension() const { return axes.size(); }
    double prefactor() const;
    /// Phi_n(x); x.size() must equal dimension().
    double operator()(std::span<const double> x) const;
    /// Phi~_n(k) = int Phi_n(x) e^{-i k.x} d^Dx.
    std::complex<double> fourier(std::span<const double> k) const;
    std::vector<double> center() const;
};

struct DirichletBox {
    double d = 1.0;
};

struct Quadratic {
    double ell = 1.0;
};

/// Tabulated potential on a uniform grid. With `hard_walls` the grid ends are
/// physical Dirichlet walls; otherwise the table is a window onto a potential that
/// confines on its own, and the end values must lie above every requested level.
struct Tabulated1D {
    std::vector<double> x;
    std::vector<double> v;
    bool hard_walls = false;
};

/// Static metric ds^2 = -beta^2 dt^2 + h dx^2 on one spatial axis.
struct StaticCurved1D {
    std::vector<double> x;
    std::vector<double> lapse;
    std::vector<double> metric;
    std::vector<double> v;
    bool hard_walls = false;
};

struct Potential {
    std::variant<DirichletBox, Quadratic, Tabulated1D, StaticCurved1D> kind;
    double mass = 0.0;

    std::string name() const;
    /// V(x) (not 2V); +inf outside a Dirichlet box or a hard-walled table.
    double operator()(std::span<const double> x) const;
};

struct ModeBasis {
    Potential potential;
    std::vector<Mode> modes;  // ascending omega
    int truncation = 0;       // per-axis cap or requested mode count

    const Mode& find(const ModeIndex& index) const;
    std::size_t position(const ModeIndex& index) const;
};

/// Cubic cavity [origin, origin + d]^3, indices 1..n_max per axis.
ModeBasis box_modes(double d, double m, int n_max, Vec3 origin = {0.0, 0.0, 0.0});

/// V = |x - center|^2 / (2 ell^4), indices 0..n_max per axis.
ModeBasis quadratic_modes(double ell, double m, int n_max, Vec3 center = {0.0, 0.0, 0.0});

/// Lowest `count` modes of -d^2/dx^2 + m^2 + 2V on the tabulation grid.
ModeBasis solve_modes_fd(const Tabulated1D& potential, double m, int count);

/// Lowest `count` modes of the separated static-slice equation
///   (beta/sqrt h) d_x(beta sqrt(h) h^{xx} d_x Phi) + (omega^2 - beta^2 (m^2 + 2V)) Phi = 0,
/// normalized with the induced measure: int dx sqrt(h)/beta |Phi|^2 = 1/(2 omega).
ModeBasis static_curved_modes_1d(const StaticCurved1D& geometry, double m, int count);

/// 3D basis from three 1D bases solved at zero mass: omega^2 = m^2 + sum of axis gaps.
/// Keeps the `max_modes` lowest products.
ModeBasis separable_product(const ModeBasis& bx, const ModeBasis& by, const ModeBasis& bz,
                            double m, std::size_t max_modes);

struct OrthonormalityReport {
    double max_deviation = 0.0;      // max |int Phi_n Phi_m - delta_nm / (2 omega_n)|
    double max_norm_residual = 0.0;  // max |2 omega_n int |Phi_n|^2 - 1|
    double max_offdiagonal = 0.0;    // max |int Phi_n Phi_m|, n != m
};

OrthonormalityReport check_orthonormality(const ModeBasis& basis);

/// ||E^2 Phi - omega^2 Phi||_2 / ||Phi||_2 with the discrete operator used by the
/// grid solvers. Only meaningful for 1D grid bases.
double fd_eigen_residual(const ModeBasis& basis, const Mode& mode);

} // namespace lqft
