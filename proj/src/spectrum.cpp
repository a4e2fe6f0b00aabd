#include "lqft/spectrum.hpp"

#include "lqft/error.hpp"
#include "lqft/hermite.hpp"
#include "lqft/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

namespace lqft {

namespace {

using cd = std::complex<double>;
constexpr double pi = std::numbers::pi;

template <class... Ts>
struct overloaded : Ts... {
    using Ts::operator()...;
};

// int_0^L e^{i q x} dx, stable near q = 0.
cd exp_segment(double q, double length) {
    const double z = q * length;
    if (std::abs(z) < 1e-4) {
        const cd iz(0.0, z);
        return length * (1.0 + iz / 2.0 + iz * iz / 6.0 + iz * iz * iz / 24.0);
    }
    return (std::exp(cd(0.0, z)) - 1.0) / cd(0.0, q);
}

double interpolate(const Grid1D& g, const std::vector<double>& values, double x) {
    if (x < g.x.front() || x > g.x.back()) return 0.0;
    const double s = (x - g.x.front()) / g.spacing;
    const auto i = std::min<std::size_t>(static_cast<std::size_t>(s), g.x.size() - 2);
    const double frac = s - static_cast<double>(i);
    return (1.0 - frac) * values[i] + frac * values[i + 1];
}

bool less_mode(const Mode& a, const Mode& b) {
    if (a.omega != b.omega) return a.omega < b.omega;
    return a.index < b.index;
}

} // namespace

double evaluate(const AxisProfile& profile, double x) {
    return std::visit(
        overloaded{
            [x](const SineAxis& s) {
                const double u = x - s.origin;
                if (u <= 0.0 || u >= s.length) return 0.0;
                return std::sqrt(2.0 / s.length) * std::sin(pi * s.n * u / s.length);
            },
            [x](const HermiteAxis& h) {
                return hermite_function(h.n, (x - h.center) / h.ell) / std::sqrt(h.ell);
            },
            [x](const GridAxis& g) { return interpolate(*g.grid, g.values, x); },
        },
        profile);
}

std::complex<double> fourier(const AxisProfile& profile, double k) {
    return std::visit(
        overloaded{
            [k](const SineAxis& s) {
                // sin(a u) = (e^{iau} - e^{-iau}) / 2i, shifted to the origin.
                const double a = pi * s.n / s.length;
                const cd inner = (exp_segment(a - k, s.length) - exp_segment(-a - k, s.length)) /
                                 cd(0.0, 2.0);
                return std::sqrt(2.0 / s.length) * std::exp(cd(0.0, -k * s.origin)) * inner;
            },
            [k](const HermiteAxis& h) {
                // Hermite functions are eigenfunctions of the Fourier transform.
                static const cd minus_i_pow[4] = {cd(1, 0), cd(0, -1), cd(-1, 0), cd(0, 1)};
                const double amp = std::sqrt(2.0 * pi * h.ell) * hermite_function(h.n, k * h.ell);
                return amp * minus_i_pow[h.n % 4] * std::exp(cd(0.0, -k * h.center));
            },
            [k](const GridAxis& g) {
                cd sum = 0.0;
                const auto& grid = *g.grid;
                for (std::size_t i = 0; i < grid.x.size(); ++i)
                    sum += g.values[i] * std::exp(cd(0.0, -k * grid.x[i]));
                return sum * grid.spacing;
            },
        },
        profile);
}

double centroid(const AxisProfile& profile) {
    return std::visit(
        overloaded{
            [](const SineAxis& s) { return s.origin + 0.5 * s.length; },
            [](const HermiteAxis& h) { return h.center; },
            [](const GridAxis& g) {
                const auto& grid = *g.grid;
                double num = 0.0, den = 0.0;
                for (std::size_t i = 0; i < grid.x.size(); ++i) {
                    const double w = grid.weight[i] * g.values[i] * g.values[i];
                    num += w * grid.x[i];
                    den += w;
                }
                return den > 0.0 ? num / den : 0.0;
            },
        },
        profile);
}

std::pair<double, double> effective_support(const AxisProfile& profile) {
    return std::visit(
        overloaded{
            [](const SineAxis& s) { return std::pair{s.origin, s.origin + s.length}; },
            [](const HermiteAxis& h) {
                const double reach = h.ell * (std::sqrt(2.0 * h.n + 1.0) + 9.0);
                return std::pair{h.center - reach, h.center + reach};
            },
            [](const GridAxis& g) { return std::pair{g.grid->x.front(), g.grid->x.back()}; },
        },
        profile);
}

double axis_overlap(const AxisProfile& a, const AxisProfile& b) {
    const auto* ga = std::get_if<GridAxis>(&a);
    const auto* gb = std::get_if<GridAxis>(&b);
    if (ga && gb && ga->grid == gb->grid) {
        const auto& grid = *ga->grid;
        double sum = 0.0;
        for (std::size_t i = 0; i < grid.x.size(); ++i)
            sum += grid.weight[i] * ga->values[i] * gb->values[i];
        return sum * grid.spacing;
    }
    const auto [a0, a1] = effective_support(a);
    const auto [b0, b1] = effective_support(b);
    const double lo = std::max(a0, b0), hi = std::min(a1, b1);
    if (hi <= lo) return 0.0;
    auto order_of = [](const AxisProfile& p) {
        return std::visit(overloaded{[](const SineAxis& s) { return s.n; },
                                     [](const HermiteAxis& h) { return h.n; },
                                     [](const GridAxis&) { return 0; }},
                          p);
    };
    std::size_t panels = 48 + 4 * static_cast<std::size_t>(order_of(a) + order_of(b));
    if (ga || gb) {
        // Piecewise-linear profiles: align panels with the grid cells.
        const auto& grid = ga ? *ga->grid : *gb->grid;
        panels = std::max<std::size_t>(panels, static_cast<std::size_t>((hi - lo) / grid.spacing) + 1);
    }
    const auto nw = quad::composite(lo, hi, panels, ga || gb ? 4 : 16);
    double sum = 0.0;
    for (std::size_t i = 0; i < nw.x.size(); ++i) sum += nw.w[i] * evaluate(a, nw.x[i]) * evaluate(b, nw.x[i]);
    return sum;
}

std::string format_index(const ModeIndex& index) {
    std::ostringstream os;
    os << '(';
    for (std::size_t i = 0; i < index.size(); ++i) os << (i ? "," : "") << index[i];
    os << ')';
    return os.str();
}

double Mode::prefactor() const { return 1.0 / std::sqrt(2.0 * omega); }

double Mode::operator()(std::span<const double> x) const {
    require(x.size() == axes.size(), ErrorKind::domain, "mode evaluated at a point of wrong dimension");
    double v = prefactor();
    for (std::size_t i = 0; i < axes.size(); ++i) v *= evaluate(axes[i], x[i]);
    return v;
}

std::complex<double> Mode::fourier(std::span<const double> k) const {
    require(k.size() == axes.size(), ErrorKind::domain, "wavevector of wrong dimension");
    cd v = prefactor();
    for (std::size_t i = 0; i < axes.size(); ++i) v *= lqft::fourier(axes[i], k[i]);
    return v;
}

std::vector<double> Mode::center() const {
    std::vector<double> c(axes.size());
    for (std::size_t i = 0; i < axes.size(); ++i) c[i] = centroid(axes[i]);
    return c;
}

std::string Potential::name() const {
    return std::visit(overloaded{[](const DirichletBox&) { return std::string("box"); },
                                 [](const Quadratic&) { return std::string("quadratic"); },
                                 [](const Tabulated1D&) { return std::string("tabulated"); },
                                 [](const StaticCurved1D&) { return std::string("static_curved"); }},
                      kind);
}

double Potential::operator()(std::span<const double> x) const {
    constexpr double inf = std::numeric_limits<double>::infinity();
    auto table = [&](const std::vector<double>& grid, const std::vector<double>& v, bool walls) {
        if (x[0] < grid.front() || x[0] > grid.back()) return walls ? inf : std::max(v.front(), v.back());
        const double s = (x[0] - grid.front()) / (grid[1] - grid[0]);
        const auto i = std::min<std::size_t>(static_cast<std::size_t>(s), grid.size() - 2);
        const double f = s - static_cast<double>(i);
        return (1.0 - f) * v[i] + f * v[i + 1];
    };
    return std::visit(
        overloaded{
            [&](const DirichletBox& b) {
                for (double xi : x)
                    if (xi < 0.0 || xi > b.d) return inf;
                return 0.0;
            },
            [&](const Quadratic& q) {
                double r2 = 0.0;
                for (double xi : x) r2 += xi * xi;
                return r2 / (2.0 * std::pow(q.ell, 4));
            },
            [&](const Tabulated1D& t) { return table(t.x, t.v, t.hard_walls); },
            [&](const StaticCurved1D& c) { return table(c.x, c.v, c.hard_walls); },
        },
        kind);
}

const Mode& ModeBasis::find(const ModeIndex& index) const { return modes[position(index)]; }

std::size_t ModeBasis::position(const ModeIndex& index) const {
    for (std::size_t i = 0; i < modes.size(); ++i)
        if (modes[i].index == index) return i;
    fail(ErrorKind::domain, "mode " + format_index(index) + " not in basis");
}

ModeBasis box_modes(double d, double m, int n_max, Vec3 origin) {
    require(d > 0.0, ErrorKind::invalid_parameter, "box side must be positive");
    require(m >= 0.0, ErrorKind::invalid_parameter, "mass must be non-negative");
    require(n_max >= 1, ErrorKind::invalid_parameter, "box n_max must be at least 1");
    ModeBasis basis{Potential{DirichletBox{d}, m}, {}, n_max};
    for (int nx = 1; nx <= n_max; ++nx)
        for (int ny = 1; ny <= n_max; ++ny)
            for (int nz = 1; nz <= n_max; ++nz) {
                Mode mode;
                mode.index = {nx, ny, nz};
                mode.omega = std::sqrt(m * m + pi * pi / (d * d) * (nx * nx + ny * ny + nz * nz));
                mode.axes = {SineAxis{d, nx, origin[0]}, SineAxis{d, ny, origin[1]},
                             SineAxis{d, nz, origin[2]}};
                basis.modes.push_back(std::move(mode));
            }
    std::stable_sort(basis.modes.begin(), basis.modes.end(), less_mode);
    return basis;
}

ModeBasis quadratic_modes(double ell, double m, int n_max, Vec3 center) {
    require(ell > 0.0, ErrorKind::invalid_parameter, "quadratic length scale must be positive");
    require(m >= 0.0, ErrorKind::invalid_parameter, "mass must be non-negative");
    require(n_max >= 0, ErrorKind::invalid_parameter, "quadratic n_max must be non-negative");
    ModeBasis basis{Potential{Quadratic{ell}, m}, {}, n_max};
    for (int nx = 0; nx <= n_max; ++nx)
        for (int ny = 0; ny <= n_max; ++ny)
            for (int nz = 0; nz <= n_max; ++nz) {
                Mode mode;
                mode.index = {nx, ny, nz};
                mode.omega = std::sqrt(m * m + 2.0 / (ell * ell) * (nx + ny + nz + 1.5));
                mode.axes = {HermiteAxis{ell, nx, center[0]}, HermiteAxis{ell, ny, center[1]},
                             HermiteAxis{ell, nz, center[2]}};
                basis.modes.push_back(std::move(mode));
            }
    std::stable_sort(basis.modes.begin(), basis.modes.end(), less_mode);
    return basis;
}

ModeBasis separable_product(const ModeBasis& bx, const ModeBasis& by, const ModeBasis& bz,
                            double m, std::size_t max_modes) {
    require(m >= 0.0, ErrorKind::invalid_parameter, "mass must be non-negative");
    const ModeBasis* axes[3] = {&bx, &by, &bz};
    for (const auto* b : axes) {
        require(!b->modes.empty(), ErrorKind::invalid_parameter, "empty axis basis");
        require(b->modes.front().dimension() == 1, ErrorKind::invalid_parameter,
                "separable_product takes 1D bases");
    }
    auto gap2 = [](const ModeBasis& b, const Mode& mode) {
        return mode.omega * mode.omega - b.potential.mass * b.potential.mass;
    };
    ModeBasis basis{Potential{Quadratic{1.0}, m}, {}, static_cast<int>(max_modes)};
    for (const auto& mx : bx.modes)
        for (const auto& my : by.modes)
            for (const auto& mz : bz.modes) {
                Mode mode;
                mode.index = {mx.index[0], my.index[0], mz.index[0]};
                mode.omega = std::sqrt(m * m + gap2(bx, mx) + gap2(by, my) + gap2(bz, mz));
                mode.axes = {mx.axes[0], my.axes[0], mz.axes[0]};
                basis.modes.push_back(std::move(mode));
            }
    std::stable_sort(basis.modes.begin(), basis.modes.end(), less_mode);
    if (basis.modes.size() > max_modes) basis.modes.resize(max_modes);
    // Tabulation of the x axis stands in for the (non-representable) 3D potential.
    basis.potential.kind = bx.potential.kind;
    return basis;
}

OrthonormalityReport check_orthonormality(const ModeBasis& basis) {
    require(!basis.modes.empty(), ErrorKind::invalid_parameter, "empty basis");
    OrthonormalityReport report;
    const auto& modes = basis.modes;
    for (std::size_t i = 0; i < modes.size(); ++i)
        for (std::size_t j = i; j < modes.size(); ++j) {
            double overlap = modes[i].prefactor() * modes[j].prefactor();
            for (std::size_t a = 0; a < modes[i].dimension(); ++a)
                overlap *= axis_overlap(modes[i].axes[a], modes[j].axes[a]);
            const double target = i == j ? 1.0 / (2.0 * modes[i].omega) : 0.0;
            report.max_deviation = std::max(report.max_deviation, std::abs(overlap - target));
            if (i == j)
                report.max_norm_residual =
                    std::max(report.max_norm_residual, std::abs(2.0 * modes[i].omega * overlap - 1.0));
            else
                report.max_offdiagonal = std::max(report.max_offdiagonal, std::abs(overlap));
        }
    return report;
}

} // namespace lqft
