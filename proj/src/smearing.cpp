#include "lqft/smearing.hpp"

#include "lqft/error.hpp"
#include "lqft/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace lqft {

namespace {

using cd = std::complex<double>;
constexpr double pi = std::numbers::pi;

template <class... Ts>
struct overloaded : Ts... {
    using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

double bump(const CompactTime& c, double t) {
    if (t <= c.t0 || t >= c.t1) return 0.0;
    const double s = (2.0 * t - c.t0 - c.t1) / (c.t1 - c.t0);
    return std::exp(1.0 - 1.0 / (1.0 - s * s));
}

quad::NodesWeights bump_nodes(const CompactTime& c, std::size_t panels) {
    return quad::composite(c.t0, c.t1, panels, 16);
}

// 1D |k| beyond which |f~(k)|^2 < rel * max over the scanned range.
double axis_cutoff(const AxisProfile& p, double rel) {
    const double lr = -std::log(rel);
    return std::visit(
        overloaded{[&](const HermiteAxis& h) {
                       return (std::sqrt(2.0 * h.n + 1.0) + std::sqrt(lr)) / h.ell;
                   },
                   [&](const SineAxis& s) {
                       return 2.0 * (s.n * pi / s.length) * std::pow(rel, -0.25);
                   },
                   [&](const GridAxis& g) {
                       const auto& x = g.grid->x;
                       const double len = x.back() - x.front();
                       const double nyquist = pi / g.grid->spacing;
                       const double dk = pi / (4.0 * len);
                       double peak = 0.0, last = 0.0;
                       for (double k = 0.0; k <= nyquist; k += dk) {
                           const double pw = std::norm(fourier(p, k));
                           peak = std::max(peak, pw);
                           if (pw >= rel * peak) last = k;
                       }
                       return std::min(last + 8.0 * dk, nyquist);
                   }},
        p);
}

} // namespace

double Window::operator()(double t) const {
    return std::visit(overloaded{[&](const GaussianTime& g) { return std::exp(-pi * t * t / (2.0 * g.T * g.T)); },
                                 [&](const CompactTime& c) { return bump(c, t); },
                                 [&](const ConstantTime& c) { return c.value; }},
                      kind);
}

std::complex<double> Window::operator()(std::complex<double> t) const {
    return std::visit(overloaded{[&](const GaussianTime& g) { return std::exp(-pi * t * t / (2.0 * g.T * g.T)); },
                                 [&](const CompactTime& c) -> cd {
                                     require(t.imag() == 0.0, ErrorKind::domain,
                                             "bump window has no continuation off the real axis");
                                     return bump(c, t.real());
                                 },
                                 [&](const ConstantTime& c) { return cd(c.value); }},
                      kind);
}

bool Window::analytic() const { return !std::holds_alternative<CompactTime>(kind); }

std::complex<double> Window::fourier(double w) const {
    return std::visit(
        overloaded{[&](const GaussianTime& g) {
                       return cd(std::sqrt(2.0) * g.T * std::exp(-w * w * g.T * g.T / (2.0 * pi)));
                   },
                   [&](const CompactTime& c) {
                       const double len = c.t1 - c.t0;
                       const auto panels = static_cast<std::size_t>(std::max(64.0, std::ceil(std::abs(w) * len / 2.0)));
                       const auto nw = bump_nodes(c, panels);
                       cd s = 0.0;
                       for (std::size_t i = 0; i < nw.x.size(); ++i)
                           s += nw.w[i] * bump(c, nw.x[i]) * std::exp(cd(0.0, -w * nw.x[i]));
                       return s;
                   },
                   [&](const ConstantTime&) -> cd {
                       fail(ErrorKind::domain, "constant window has no Fourier transform");
                   }},
        kind);
}

double Window::square_integral() const {
    return std::visit(overloaded{[&](const GaussianTime& g) { return g.T; },
                                 [&](const CompactTime& c) {
                                     const auto nw = bump_nodes(c, 64);
                                     double s = 0.0;
                                     for (std::size_t i = 0; i < nw.x.size(); ++i)
                                         s += nw.w[i] * std::pow(bump(c, nw.x[i]), 2);
                                     return s;
                                 },
                                 [&](const ConstantTime&) -> double {
                                     fail(ErrorKind::domain, "constant window is not square integrable");
                                 }},
                      kind);
}

std::pair<double, double> Window::support() const {
    return std::visit(overloaded{[&](const GaussianTime& g) { return std::pair{-5.0 * g.T, 5.0 * g.T}; },
                                 [&](const CompactTime& c) { return std::pair{c.t0, c.t1}; },
                                 [&](const ConstantTime&) -> std::pair<double, double> {
                                     fail(ErrorKind::domain, "constant window has unbounded support");
                                 }},
                      kind);
}

double Window::duration() const {
    return std::visit(overloaded{[&](const GaussianTime& g) { return g.T; },
                                 [&](const CompactTime& c) { return c.t1 - c.t0; },
                                 [&](const ConstantTime&) { return 1.0; }},
                      kind);
}

double Window::frequency_cutoff(double rel) const {
    require(rel > 0.0 && rel < 1.0, ErrorKind::invalid_parameter, "relative cutoff must lie in (0, 1)");
    return std::visit(overloaded{[&](const GaussianTime& g) { return std::sqrt(-2.0 * pi * std::log(rel)) / g.T; },
                                 [&](const CompactTime& c) {
                                     const double len = c.t1 - c.t0;
                                     const double f0 = std::abs(fourier(0.0));
                                     double w = 1.0 / len;
                                     while (w < 1e6 / len && std::abs(fourier(w)) >= rel * f0) w *= 1.25;
                                     return w;
                                 },
                                 [&](const ConstantTime&) -> double {
                                     fail(ErrorKind::domain, "constant window has no Fourier transform");
                                 }},
                      kind);
}

std::string Window::name() const {
    return std::visit(overloaded{[](const GaussianTime&) { return std::string("gaussian"); },
                                 [](const CompactTime&) { return std::string("compact"); },
                                 [](const ConstantTime&) { return std::string("constant"); }},
                      kind);
}

Window gaussian_window(double T) {
    require(T > 0.0 && std::isfinite(T), ErrorKind::invalid_parameter, "window duration T must be positive");
    return Window{GaussianTime{T}};
}

Window compact_window(double t0, double t1) {
    require(t0 < t1, ErrorKind::invalid_parameter, "switching interval needs t0 < t1");
    return Window{CompactTime{t0, t1}};
}

Window constant_window(double value) { return Window{ConstantTime{value}}; }

std::complex<double> Smearing::lambda_minus(double t, std::span<const double> x) const {
    return std::exp(cd(0.0, -gap * t)) * lambda_static(t, x);
}

std::complex<double> Smearing::lambda_plus(double t, std::span<const double> x) const {
    return std::conj(lambda_minus(t, x));
}

double Smearing::lambda_static(double t, std::span<const double> x) const { return window(t) * mode(x); }

Smearing build_lambda(const Window& window, const Mode& mode, double redshift) {
    require(redshift > 0.0, ErrorKind::invalid_parameter, "redshift factor must be positive");
    require(mode.omega > 0.0 && !mode.axes.empty(), ErrorKind::invalid_parameter, "smearing needs a valid mode");
    Smearing s{window, mode, redshift * mode.omega, redshift, {0.0, 0.0, 0.0}};
    const auto c = mode.center();
    for (std::size_t i = 0; i < std::min<std::size_t>(3, c.size()); ++i) s.center[i] = c[i];
    return s;
}

std::complex<double> spatial_fourier(const Smearing& smearing, std::span<const double> k) {
    return smearing.mode.fourier(k);
}

bool isotropic(const Mode& mode) {
    if (mode.dimension() != 3) return false;
    const auto* h0 = std::get_if<HermiteAxis>(&mode.axes[0]);
    if (h0 == nullptr) return false;
    for (const auto& a : mode.axes) {
        const auto* h = std::get_if<HermiteAxis>(&a);
        if (h == nullptr || h->n != 0 || h->ell != h0->ell) return false;
    }
    return true;
}

double radial_power(const Mode& mode, double k) {
    require(mode.dimension() == 3, ErrorKind::invalid_parameter, "radial power is defined for 3D modes");
    if (isotropic(mode)) {
        const std::array<double, 3> kz{0.0, 0.0, k};
        return std::norm(mode.fourier(kz));
    }
    // Hermite products of equal width: the direction dependence is polynomial and
    // a small product rule is exact. Otherwise resolve the angular structure.
    bool hermite_equal = true;
    int degree = 0;
    double extent = 0.0;
    for (const auto& a : mode.axes) {
        const auto* h = std::get_if<HermiteAxis>(&a);
        const auto* h0 = std::get_if<HermiteAxis>(&mode.axes[0]);
        if (h == nullptr || h0 == nullptr || h->ell != h0->ell) hermite_equal = false;
        if (h != nullptr) degree += h->n;
        const auto [lo, hi] = effective_support(a);
        extent = std::max(extent, 0.5 * (hi - lo));
    }
    std::size_t n_theta = hermite_equal ? static_cast<std::size_t>(degree + 2)
                                        : std::min<std::size_t>(400, 16 + static_cast<std::size_t>(std::ceil(1.5 * k * extent)));
    const std::size_t n_phi = 2 * n_theta + 2;
    const auto& gl = quad::gauss_legendre(n_theta);
    double s = 0.0;
    for (std::size_t i = 0; i < n_theta; ++i) {
        const double c = gl.nodes[i];
        const double sn = std::sqrt(std::max(0.0, 1.0 - c * c));
        double ring = 0.0;
        for (std::size_t j = 0; j < n_phi; ++j) {
            const double phi = 2.0 * pi * (static_cast<double>(j) + 0.5) / static_cast<double>(n_phi);
            const std::array<double, 3> kv{k * sn * std::cos(phi), k * sn * std::sin(phi), k * c};
            ring += std::norm(mode.fourier(kv));
        }
        s += gl.weights[i] * ring / static_cast<double>(n_phi);
    }
    return 0.5 * s;
}

double fourier_cutoff(const Mode& mode, double rel) {
    require(rel > 0.0 && rel < 1.0, ErrorKind::invalid_parameter, "relative cutoff must lie in (0, 1)");
    double k2 = 0.0;
    for (const auto& a : mode.axes) k2 = std::max(k2, axis_cutoff(a, rel));
    return k2;
}

} // namespace lqft
