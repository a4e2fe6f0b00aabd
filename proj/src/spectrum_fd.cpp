// Second-order finite-difference solvers for 1D confining potentials, flat and
// static-curved. Both share one symmetric tridiagonal discretization; the flat
// solver is the curved one at beta = h = 1.

#include "lqft/error.hpp"
#include "lqft/spectrum.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>

namespace lqft {

namespace {

constexpr std::size_t min_grid_points = 64;

struct Discretization {
    std::shared_ptr<Grid1D> grid;
    Eigen::VectorXd diag;  // interior nodes 1..N-2, symmetrized by the measure weight
    Eigen::VectorXd sub;
};

Discretization discretize(const std::vector<double>& x, const std::vector<double>& lapse,
                          const std::vector<double>& metric, const std::vector<double>& v, double m) {
    const std::size_t n = x.size();
    require(n >= min_grid_points, ErrorKind::resolution,
            "grid needs at least " + std::to_string(min_grid_points) + " points");
    require(v.size() == n && lapse.size() == n && metric.size() == n, ErrorKind::invalid_parameter,
            "tabulation columns differ in length");
    require(m >= 0.0, ErrorKind::invalid_parameter, "mass must be non-negative");
    const double h = x[1] - x[0];
    require(h > 0.0, ErrorKind::invalid_parameter, "grid must be strictly increasing");
    for (std::size_t i = 1; i < n; ++i) {
        const double step = x[i] - x[i - 1];
        require(step > 0.0, ErrorKind::invalid_parameter, "grid must be strictly increasing");
        require(std::abs(step - h) <= 1e-8 * h, ErrorKind::invalid_parameter, "grid must be uniform");
    }
    for (std::size_t i = 0; i < n; ++i) {
        require(lapse[i] > 0.0 && metric[i] > 0.0, ErrorKind::invalid_geometry,
                "lapse and spatial metric must be positive at every node");
        require(std::isfinite(v[i]), ErrorKind::invalid_parameter, "potential must be finite");
    }

    auto grid = std::make_shared<Grid1D>();
    grid->x = x;
    grid->spacing = h;
    grid->weight.resize(n);
    std::vector<double> c(n), q(n);
    for (std::size_t i = 0; i < n; ++i) {
        const double root_h = std::sqrt(metric[i]);
        c[i] = lapse[i] / root_h;
        q[i] = lapse[i] * root_h * (m * m + 2.0 * v[i]);
        grid->weight[i] = root_h / lapse[i];
    }
    const std::size_t interior = n - 2;
    Discretization d{grid, Eigen::VectorXd(interior), Eigen::VectorXd(interior - 1)};
    const double inv_h2 = 1.0 / (h * h);
    for (std::size_t j = 0; j < interior; ++j) {
        const std::size_t i = j + 1;
        const double c_minus = 0.5 * (c[i - 1] + c[i]);
        const double c_plus = 0.5 * (c[i] + c[i + 1]);
        d.diag[j] = ((c_minus + c_plus) * inv_h2 + q[i]) / grid->weight[i];
        if (j + 1 < interior)
            d.sub[j] = -c_plus * inv_h2 / std::sqrt(grid->weight[i] * grid->weight[i + 1]);
    }
    return d;
}

ModeBasis solve(const Discretization& d, Potential potential, double m, int count, bool hard_walls,
                double end_level) {
    require(count >= 1, ErrorKind::invalid_parameter, "mode count must be at least 1");
    const std::size_t n = d.grid->x.size();
    require(static_cast<std::size_t>(count) * 8 <= n, ErrorKind::resolution,
            "requested " + std::to_string(count) + " modes exceeds reliable resolution of " +
                std::to_string(n) + " points (count <= grid/8)");
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es;
    es.computeFromTridiagonal(d.diag, d.sub, Eigen::ComputeEigenvectors);
    require(es.info() == Eigen::Success, ErrorKind::resolution, "tridiagonal eigensolve failed");

    const double top = es.eigenvalues()[count - 1];
    if (!hard_walls)
        require(top < end_level, ErrorKind::confinement,
                "tabulation does not confine: omega^2 = " + std::to_string(top) +
                    " reaches the end level " + std::to_string(end_level));

    ModeBasis basis{std::move(potential), {}, count};
    for (int k = 0; k < count; ++k) {
        Mode mode;
        mode.index = {k};
        const double omega2 = es.eigenvalues()[k];
        require(omega2 > 0.0, ErrorKind::confinement, "non-positive eigenvalue of E^2");
        mode.omega = std::sqrt(omega2);
        std::vector<double> values(n, 0.0);
        const auto vec = es.eigenvectors().col(k);
        double peak = 0.0;
        for (std::size_t j = 0; j + 2 < n; ++j) {
            // Unit Euclidean eigenvector -> sum h w g^2 = 1.
            values[j + 1] = vec[j] / std::sqrt(d.grid->spacing * d.grid->weight[j + 1]);
            peak = std::max(peak, std::abs(values[j + 1]));
        }
        // Sign convention: first appreciable lobe positive.
        for (double g : values)
            if (std::abs(g) > 1e-3 * peak) {
                if (g < 0.0)
                    for (double& s : values) s = -s;
                break;
            }
        mode.axes = {GridAxis{d.grid, std::move(values)}};
        basis.modes.push_back(std::move(mode));
    }
    (void)m;
    return basis;
}

} // namespace

ModeBasis solve_modes_fd(const Tabulated1D& potential, double m, int count) {
    const std::vector<double> ones(potential.x.size(), 1.0);
    const auto d = discretize(potential.x, ones, ones, potential.v, m);
    const double end_level = m * m + 2.0 * std::min(potential.v.front(), potential.v.back());
    return solve(d, Potential{potential, m}, m, count, potential.hard_walls, end_level);
}

ModeBasis static_curved_modes_1d(const StaticCurved1D& geometry, double m, int count) {
    const auto d = discretize(geometry.x, geometry.lapse, geometry.metric, geometry.v, m);
    auto end = [&](std::size_t i) {
        return geometry.lapse[i] * geometry.lapse[i] * (m * m + 2.0 * geometry.v[i]);
    };
    const double end_level = std::min(end(0), end(geometry.x.size() - 1));
    return solve(d, Potential{geometry, m}, m, count, geometry.hard_walls, end_level);
}

double fd_eigen_residual(const ModeBasis& basis, const Mode& mode) {
    const auto* grid_axis = mode.dimension() == 1 ? std::get_if<GridAxis>(&mode.axes[0]) : nullptr;
    require(grid_axis != nullptr, ErrorKind::invalid_parameter, "residual needs a 1D grid mode");
    const double m = basis.potential.mass;
    Discretization d;
    if (const auto* t = std::get_if<Tabulated1D>(&basis.potential.kind)) {
        const std::vector<double> ones(t->x.size(), 1.0);
        d = discretize(t->x, ones, ones, t->v, m);
    } else if (const auto* c = std::get_if<StaticCurved1D>(&basis.potential.kind)) {
        d = discretize(c->x, c->lapse, c->metric, c->v, m);
    } else {
        fail(ErrorKind::invalid_parameter, "residual needs a tabulated potential");
    }
    const std::size_t interior = d.diag.size();
    Eigen::VectorXd psi(interior);
    for (std::size_t j = 0; j < interior; ++j)
        psi[j] = std::sqrt(d.grid->weight[j + 1]) * grid_axis->values[j + 1];
    Eigen::VectorXd r = d.diag.cwiseProduct(psi) - mode.omega * mode.omega * psi;
    for (std::size_t j = 0; j + 1 < interior; ++j) {
        r[j] += d.sub[j] * psi[j + 1];
        r[j + 1] += d.sub[j] * psi[j];
    }
    return r.norm() / psi.norm();
}

} // namespace lqft
