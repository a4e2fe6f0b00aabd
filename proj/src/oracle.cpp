#include "lqft/oracle.hpp"

#include "lqft/error.hpp"
#include "lqft/quadrature.hpp"

#include <Eigen/Sparse>
#include <unsupported/Eigen/MatrixFunctions>

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <numbers>
#include <thread>

namespace lqft {

namespace {

using cd = std::complex<double>;
constexpr double pi = std::numbers::pi;

Eigen::MatrixXd symplectic_form(std::size_t M) {
    const auto m = static_cast<Eigen::Index>(M);
    Eigen::MatrixXd J = Eigen::MatrixXd::Zero(2 * m, 2 * m);
    J.topRightCorner(m, m).setIdentity();
    J.bottomLeftCorner(m, m) = -Eigen::MatrixXd::Identity(m, m);
    return J;
}

// Free propagator exp(t J H0): each (X_j, P_j) pair rotates by omega_j t.
Eigen::MatrixXd free_propagator(const std::vector<double>& omegas, double t) {
    const auto m = static_cast<Eigen::Index>(omegas.size());
    Eigen::MatrixXd S = Eigen::MatrixXd::Zero(2 * m, 2 * m);
    for (Eigen::Index j = 0; j < m; ++j) {
        const double c = std::cos(omegas[j] * t), s = std::sin(omegas[j] * t);
        S(j, j) = c;
        S(j, m + j) = s;
        S(m + j, j) = -s;
        S(m + j, m + j) = c;
    }
    return S;
}

// Hessians of the free part and of the coupling per unit zeta (2 lambda O in the XX block).
void hessians(const ToyUniverse& toy, Eigen::MatrixXd& H0, Eigen::MatrixXd& V) {
    const auto om = toy.omegas();
    const auto M = static_cast<Eigen::Index>(om.size());
    const auto Np = static_cast<Eigen::Index>(toy.probe_count());
    H0 = Eigen::MatrixXd::Zero(2 * M, 2 * M);
    for (Eigen::Index j = 0; j < M; ++j) H0(j, j) = H0(M + j, M + j) = om[j];
    V = Eigen::MatrixXd::Zero(2 * M, 2 * M);
    for (Eigen::Index n = 0; n < Np; ++n)
        for (Eigen::Index k = 0; k < static_cast<Eigen::Index>(toy.field_count()); ++k) {
            const double g = 2.0 * toy.lambda * toy.overlap(n, k);
            V(n, Np + k) = V(Np + k, n) = g;
        }
}

double symplectic_defect(const Eigen::MatrixXd& S, const Eigen::MatrixXd& J) {
    return (S.transpose() * J * S - J).cwiseAbs().maxCoeff();
}

double min_uncertainty_eigenvalue(const Eigen::MatrixXd& sigma, const Eigen::MatrixXd& J) {
    const Eigen::MatrixXcd m = sigma.cast<cd>() + cd(0.0, 0.5) * J.cast<cd>();
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(m, Eigen::EigenvaluesOnly);
    return es.eigenvalues().minCoeff();
}

double profile_mass_in(const AxisProfile& p, double lo, double hi) {
    const auto [a, b] = effective_support(p);
    const double l = std::max(lo, a), h = std::min(hi, b);
    if (h <= l) return 0.0;
    const auto nw = quad::composite(l, h, 400, 16);
    double s = 0.0;
    for (std::size_t i = 0; i < nw.x.size(); ++i) s += nw.w[i] * std::pow(evaluate(p, nw.x[i]), 2);
    return s;
}

double profile_abs_integral(const AxisProfile& p) {
    const auto [a, b] = effective_support(p);
    const auto nw = quad::composite(a, b, 2000, 8);
    double s = 0.0;
    for (std::size_t i = 0; i < nw.x.size(); ++i) s += nw.w[i] * std::abs(evaluate(p, nw.x[i]));
    return s;
}

} // namespace

double ToyUniverse::coupling(double t, std::size_t n, std::size_t k) const {
    return lambda * window(t) * overlap(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(k));
}

std::vector<double> ToyUniverse::omegas() const {
    std::vector<double> om;
    for (const auto& m : probe.modes) om.push_back(m.omega);
    for (const auto& m : field_basis.modes) om.push_back(m.omega);
    return om;
}

ToyUniverse ToyUniverse::isolated() const {
    ToyUniverse t = *this;
    for (Eigen::Index n = 0; n < t.overlap.rows(); ++n)
        if (n != static_cast<Eigen::Index>(accessible)) t.overlap.row(n).setZero();
    return t;
}

ToyUniverse ToyUniverse::restricted(const std::vector<std::size_t>& probe_keep,
                                    const std::vector<std::size_t>& field_keep) const {
    const auto it = std::find(probe_keep.begin(), probe_keep.end(), accessible);
    require(it != probe_keep.end(), ErrorKind::invalid_parameter, "restriction must keep the accessible mode");
    ToyUniverse t = *this;
    t.probe.modes.clear();
    t.field_basis.modes.clear();
    t.overlap.resize(static_cast<Eigen::Index>(probe_keep.size()), static_cast<Eigen::Index>(field_keep.size()));
    for (std::size_t i = 0; i < probe_keep.size(); ++i) {
        t.probe.modes.push_back(probe.modes.at(probe_keep[i]));
        for (std::size_t j = 0; j < field_keep.size(); ++j)
            t.overlap(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) =
                overlap(static_cast<Eigen::Index>(probe_keep[i]), static_cast<Eigen::Index>(field_keep[j]));
    }
    for (std::size_t k : field_keep) t.field_basis.modes.push_back(field_basis.modes.at(k));
    t.accessible = static_cast<std::size_t>(it - probe_keep.begin());
    return t;
}

CouplingConfig ToyUniverse::coupling_config(const QuadratureControls& quad) const {
    CouplingConfig c;
    c.lambda = lambda;
    c.smearing = build_lambda(window, probe.modes.at(accessible));
    c.field = field;
    c.quad = quad;
    return c;
}

ToyUniverse build_toy(const ModeBasis& probe_basis, double box_d, Vec3 box_origin, double field_m, int field_cap,
                      const Window& window, double lambda, std::size_t accessible) {
    require(!probe_basis.modes.empty(), ErrorKind::invalid_parameter, "toy needs at least one probe mode");
    require(accessible < probe_basis.modes.size(), ErrorKind::invalid_parameter, "accessible index out of range");
    ToyUniverse toy;
    toy.probe = probe_basis;
    toy.field = BoxFieldSpec{box_d, field_m, field_cap, box_origin, 0.0};
    toy.field_basis = box_modes(box_d, field_m, field_cap, box_origin);
    toy.window = window;
    toy.lambda = lambda;
    toy.accessible = accessible;
    for (const auto& m : probe_basis.modes) {
        require(m.dimension() == 3, ErrorKind::invalid_parameter, "toy probe modes must be 3D");
        for (int a = 0; a < 3; ++a) {
            const double leak = 1.0 - profile_mass_in(m.axes[a], box_origin[a], box_origin[a] + box_d);
            if (leak > 1e-10) {
                char buf[160];
                std::snprintf(buf, sizeof buf, "probe mode %s leaks %.3g of its norm out of the field box",
                              format_index(m.index).c_str(), leak);
                fail(ErrorKind::invalid_geometry, buf);
            }
        }
    }
    toy.overlap.resize(static_cast<Eigen::Index>(toy.probe_count()), static_cast<Eigen::Index>(toy.field_count()));
    for (std::size_t n = 0; n < toy.probe_count(); ++n) {
        const auto o = box_field_overlaps(toy.field, toy.field_basis, probe_basis.modes[n]);
        for (std::size_t k = 0; k < o.size(); ++k)
            toy.overlap(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(k)) = o[k];
    }
    return toy;
}

GaussianState GaussianState::vacuum(std::size_t modes) {
    const auto n = static_cast<Eigen::Index>(2 * modes);
    return {0.5 * Eigen::MatrixXd::Identity(n, n), Eigen::VectorXd::Zero(n)};
}

Evolution evolve_exact(const ToyUniverse& toy, const GaussianState& initial, double t0, double t1,
                       std::size_t steps) {
    const auto om = toy.omegas();
    const std::size_t M = om.size();
    require(initial.covariance.rows() == static_cast<Eigen::Index>(2 * M), ErrorKind::invalid_parameter,
            "initial covariance does not match the toy universe");
    require(t1 > t0, ErrorKind::invalid_parameter, "evolution needs t1 > t0");
    const double wmax = *std::max_element(om.begin(), om.end());
    require(*std::min_element(om.begin(), om.end()) > 0.0, ErrorKind::invalid_parameter,
            "toy frequencies must be positive");
    require(static_cast<double>(steps) >= 40.0 * wmax * (t1 - t0) / (2.0 * pi), ErrorKind::invalid_parameter,
            "too few steps for the stiffest frequency");

    Eigen::MatrixXd H0, V;
    hessians(toy, H0, V);
    const Eigen::MatrixXd J = symplectic_form(M);
    const Eigen::MatrixXd A0 = J * H0, B = J * V;
    const Eigen::MatrixXd C = A0 * B - B * A0;
    const double h = (t1 - t0) / static_cast<double>(steps);
    const double c1 = 0.5 - std::sqrt(3.0) / 6.0, c2 = 0.5 + std::sqrt(3.0) / 6.0;
    const double k2 = std::sqrt(3.0) * h * h / 12.0;

    Eigen::MatrixXd S = Eigen::MatrixXd::Identity(2 * M, 2 * M);
    for (std::size_t i = 0; i < steps; ++i) {
        const double t = t0 + h * static_cast<double>(i);
        const double z1 = toy.window(t + c1 * h), z2 = toy.window(t + c2 * h);
        const Eigen::MatrixXd Om = h * A0 + (0.5 * h * (z1 + z2)) * B + (k2 * (z1 - z2)) * C;
        const Eigen::MatrixXd E = Om.exp();
        if (i % 256 == 0 && symplectic_defect(E, J) > 1e-10)
            fail(ErrorKind::integrator, "step propagator lost symplecticity");
        S = E * S;
    }

    Evolution ev;
    ev.propagator = S;
    const Eigen::MatrixXd S0_t0 = free_propagator(om, t0);
    const Eigen::MatrixXd sigma_s0 = S0_t0 * initial.covariance * S0_t0.transpose();
    ev.schrodinger.covariance = S * sigma_s0 * S.transpose();
    ev.schrodinger.mean = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(2 * M));
    const Eigen::MatrixXd back = free_propagator(om, -t1);
    ev.interaction.covariance = back * ev.schrodinger.covariance * back.transpose();
    ev.interaction.covariance = 0.5 * (ev.interaction.covariance + ev.interaction.covariance.transpose()).eval();
    ev.interaction.mean = ev.schrodinger.mean;

    auto& d = ev.diagnostics;
    d.steps = steps;
    d.symplectic_defect = symplectic_defect(S, J);
    d.purity_drift = std::abs((2.0 * ev.schrodinger.covariance).determinant() - (2.0 * sigma_s0).determinant());
    d.uncertainty_min = min_uncertainty_eigenvalue(ev.schrodinger.covariance, J);
    const double e0 = 0.5 * ((H0 + toy.window(t0) * V) * sigma_s0).trace();
    const double e1 = 0.5 * ((H0 + toy.window(t1) * V) * ev.schrodinger.covariance).trace();
    d.energy_drift = std::abs(e1 - e0) / std::max(std::abs(e0), 1e-300);
    if (d.uncertainty_min < -1e-8) fail(ErrorKind::integrator, "evolved covariance violates the uncertainty relation");
    return ev;
}

TracedMode trace_to_mode(const GaussianState& state, std::size_t index, int dim, int work_dim) {
    const std::size_t M = state.modes();
    require(index < M, ErrorKind::invalid_parameter, "mode index out of range");
    require(dim >= 1 && work_dim >= dim, ErrorKind::invalid_parameter, "invalid Fock truncation");
    const auto i = static_cast<Eigen::Index>(index), m = static_cast<Eigen::Index>(M);
    const double sxx = state.covariance(i, i), spp = state.covariance(m + i, m + i);
    const double sxp = state.covariance(i, m + i);
    const double N = 0.5 * (sxx + spp) - 0.5;
    const cd Mom(0.5 * (sxx - spp), sxp);  // <a^2>
    const double nu_half = std::sqrt(std::max(0.25, (N + 0.5) * (N + 0.5) - std::norm(Mom)));
    const double nbar = nu_half - 0.5;
    const double r = 0.5 * std::acosh(std::max(1.0, (N + 0.5) / nu_half));
    const double phi = std::abs(Mom) > 0.0 ? std::arg(-Mom) : 0.0;

    const int K = work_dim;
    Eigen::MatrixXcd a = Eigen::MatrixXcd::Zero(K, K);
    for (int n = 1; n < K; ++n) a(n - 1, n) = std::sqrt(static_cast<double>(n));
    const Eigen::MatrixXcd ad = a.adjoint();
    const cd z = std::polar(r, phi);
    const Eigen::MatrixXcd gen = 0.5 * (std::conj(z) * (a * a) - z * (ad * ad));
    const Eigen::MatrixXcd Sq = gen.exp();
    Eigen::MatrixXcd th = Eigen::MatrixXcd::Zero(K, K);
    const double q = nbar / (nbar + 1.0);
    for (int n = 0; n < K; ++n) th(n, n) = (1.0 - q) * std::pow(q, n);
    const Eigen::MatrixXcd rho = Sq * th * Sq.adjoint();

    TracedMode out;
    out.state = vacuum_state(dim);
    out.state.rho = rho.topLeftCorner(dim, dim);
    out.captured = out.state.rho.trace().real();
    out.truncation_warning = out.captured < 1.0 - 1e-6;
    out.thermal_occupation = nbar;
    out.squeezing = r;
    return out;
}

ReducedState fock_reference(const ToyUniverse& toy, double t0, double t1, std::size_t steps, int cutoff, int dim) {
    const auto om = toy.omegas();
    const std::size_t M = om.size();
    require(M <= 4, ErrorKind::invalid_parameter, "Fock reference is limited to 4 modes");
    require(cutoff >= dim - 1 && cutoff >= 1, ErrorKind::invalid_parameter, "Fock cutoff below the output truncation");
    const int L = cutoff + 1;
    std::size_t D = 1;
    for (std::size_t j = 0; j < M; ++j) D *= static_cast<std::size_t>(L);
    std::vector<std::size_t> stride(M);
    for (std::size_t j = M; j-- > 0;) stride[j] = (j + 1 == M) ? 1 : stride[j + 1] * static_cast<std::size_t>(L);
    auto level = [&](std::size_t s, std::size_t j) { return static_cast<int>((s / stride[j]) % static_cast<std::size_t>(L)); };

    std::vector<double> E(D, 0.0);
    for (std::size_t s = 0; s < D; ++s)
        for (std::size_t j = 0; j < M; ++j) E[s] += om[j] * (level(s, j) + 0.5);

    // 2 lambda O_nk X_n Y_k with X = (a + a^dagger)/sqrt 2: per unit zeta.
    std::vector<Eigen::Triplet<double>> trip;
    const std::size_t Np = toy.probe_count();
    for (std::size_t n = 0; n < Np; ++n)
        for (std::size_t k = 0; k < toy.field_count(); ++k) {
            const double g = 2.0 * toy.lambda * toy.overlap(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(k)) * 0.5;
            if (g == 0.0) continue;
            const std::size_t jn = n, jk = Np + k;
            for (std::size_t s = 0; s < D; ++s) {
                const int ln = level(s, jn), lk = level(s, jk);
                for (int dn : {-1, 1})
                    for (int dk : {-1, 1}) {
                        const int mn = ln + dn, mk = lk + dk;
                        if (mn < 0 || mn >= L || mk < 0 || mk >= L) continue;
                        const double an = std::sqrt(static_cast<double>(std::max(ln, mn)));
                        const double ak = std::sqrt(static_cast<double>(std::max(lk, mk)));
                        const std::size_t tgt = s + static_cast<std::size_t>(dn) * stride[jn] + static_cast<std::size_t>(dk) * stride[jk];
                        trip.emplace_back(static_cast<int>(tgt), static_cast<int>(s), g * an * ak);
                    }
            }
        }
    Eigen::SparseMatrix<double> Hint(static_cast<Eigen::Index>(D), static_cast<Eigen::Index>(D));
    Hint.setFromTriplets(trip.begin(), trip.end());

    Eigen::VectorXcd psi = Eigen::VectorXcd::Zero(static_cast<Eigen::Index>(D));
    psi(0) = 1.0;
    auto rhs = [&](double t, const Eigen::VectorXcd& y) {
        Eigen::VectorXcd u(y.size());
        for (Eigen::Index s = 0; s < y.size(); ++s) u(s) = std::exp(cd(0.0, -E[static_cast<std::size_t>(s)] * t)) * y(s);
        Eigen::VectorXcd v = Hint * u;
        for (Eigen::Index s = 0; s < y.size(); ++s) v(s) *= cd(0.0, -1.0) * toy.window(t) * std::exp(cd(0.0, E[static_cast<std::size_t>(s)] * t));
        return v;
    };
    const double h = (t1 - t0) / static_cast<double>(steps);
    for (std::size_t i = 0; i < steps; ++i) {
        const double t = t0 + h * static_cast<double>(i);
        const Eigen::VectorXcd k1 = rhs(t, psi);
        const Eigen::VectorXcd k2 = rhs(t + 0.5 * h, psi + 0.5 * h * k1);
        const Eigen::VectorXcd k3 = rhs(t + 0.5 * h, psi + 0.5 * h * k2);
        const Eigen::VectorXcd k4 = rhs(t + h, psi + h * k3);
        psi += (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
    }
    ReducedState out = vacuum_state(dim);
    out.rho.setZero();
    const std::size_t ja = toy.accessible;
    for (std::size_t s = 0; s < D; ++s) {
        const int ls = level(s, ja);
        if (ls >= dim) continue;
        for (int lp = 0; lp < dim; ++lp) {
            const std::size_t sp = s + static_cast<std::size_t>(lp - ls) * stride[ja];
            out.rho(ls, lp) += psi(static_cast<Eigen::Index>(s)) * std::conj(psi(static_cast<Eigen::Index>(sp)));
        }
    }
    return out;
}

double field_truncation_bound(const ToyUniverse& toy, double epsilon) {
    BoxFieldSpec spec = toy.field;
    spec.epsilon = epsilon;
    Event c;
    for (int i = 0; i < 3; ++i) c.x[i] = spec.origin[i] + 0.5 * spec.d;
    const double tail = boxfield_wightman(spec, c, c).tail_bound;
    const Mode& m = toy.probe.modes.at(toy.accessible);
    double abs_phi = m.prefactor();
    for (const auto& a : m.axes) abs_phi *= profile_abs_integral(a);
    double abs_zeta = 0.0;
    if (const auto* g = std::get_if<GaussianTime>(&toy.window.kind)) abs_zeta = std::sqrt(2.0) * g->T;
    else abs_zeta = std::abs(toy.window.fourier(0.0));
    return toy.lambda * toy.lambda * abs_zeta * abs_zeta * abs_phi * abs_phi * tail;
}

double fit_exponent(const std::vector<double>& x, const std::vector<double>& y) {
    require(x.size() == y.size() && x.size() >= 2, ErrorKind::invalid_parameter, "fit needs two or more points");
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    const double n = static_cast<double>(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) {
        require(x[i] > 0.0 && y[i] > 0.0, ErrorKind::domain, "log-log fit needs positive values");
        const double lx = std::log(x[i]), ly = std::log(y[i]);
        sx += lx;
        sy += ly;
        sxx += lx * lx;
        sxy += lx * ly;
    }
    return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

EquivalenceReport verify_equivalence(const ToyScenario& sc, const std::vector<double>& lambdas, unsigned threads) {
    require(lambdas.size() >= 2, ErrorKind::invalid_parameter, "equivalence fit needs at least two couplings");
    for (double l : lambdas) require(l > 0.0, ErrorKind::invalid_parameter, "couplings must be positive");
    EquivalenceReport rep;
    rep.points.resize(lambdas.size());
    const ToyUniverse base = build_toy(sc.probe, sc.box_d, sc.box_origin, sc.field_m, sc.field_cap, sc.window, 1.0,
                                       sc.accessible);
    std::vector<std::string> errors(lambdas.size());
    std::atomic<std::size_t> next{0};
    auto worker = [&] {
        for (std::size_t i = next++; i < lambdas.size(); i = next++) {
            try {
                ToyUniverse toy = base;
                toy.lambda = lambdas[i];
                if (sc.isolate) toy = toy.isolated();
                const auto ev = evolve_exact(toy, GaussianState::vacuum(toy.size()), sc.t0, sc.t1, sc.steps);
                const auto tr = trace_to_mode(ev.interaction, toy.accessible, sc.dim);
                auto& p = rep.points[i];
                p.lambda = lambdas[i];
                p.exact = tr.state;
                p.exact.tolerance = sc.quad.abs_tol;
                p.truncation_warning = tr.truncation_warning;
                p.diagnostics = ev.diagnostics;
                p.perturbative = reduced_state(toy.coupling_config(sc.quad), sc.dim);
                p.delta = frobenius_distance(p.exact, p.perturbative);
            } catch (const Error& e) {
                errors[i] = e.what();
            }
        }
    };
    const unsigned nt = std::max(1u, std::min<unsigned>(threads, static_cast<unsigned>(lambdas.size())));
    std::vector<std::thread> pool;
    for (unsigned t = 1; t < nt; ++t) pool.emplace_back(worker);
    worker();
    for (auto& t : pool) t.join();
    for (const auto& e : errors)
        if (!e.empty()) fail(ErrorKind::integrator, e);

    std::vector<double> x, y;
    std::size_t imax = 0;
    for (std::size_t i = 0; i < rep.points.size(); ++i) {
        const auto& p = rep.points[i];
        x.push_back(p.lambda);
        y.push_back(std::max(p.delta, 1e-300));
        if (p.lambda > rep.points[imax].lambda) imax = i;
        const auto& d = p.diagnostics;
        if (d.symplectic_defect > 1e-10 || d.purity_drift > 1e-8 || d.uncertainty_min < -1e-8)
            rep.invariants_ok = false;
    }
    rep.exponent = fit_exponent(x, y);
    rep.delta_max = rep.points[imax].delta;
    rep.passed = rep.exponent >= 3.5 && rep.delta_max < 1e-3 && rep.invariants_ok;
    char buf[200];
    std::snprintf(buf, sizeof buf, "exponent %.4f, Delta(lambda_max) %.3e, invariants %s", rep.exponent, rep.delta_max,
                  rep.invariants_ok ? "ok" : "violated");
    rep.message = buf;
    return rep;
}

} // namespace lqft
