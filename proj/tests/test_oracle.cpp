#include "lqft/oracle.hpp"
#include "support.hpp"
#include <doctest.h>
#include <numbers>

using namespace lqft;
using lqft_test::rel;
using lqft_test::throws_kind;
using cd = std::complex<double>;

namespace {

constexpr double L = 18.5;

ModeBasis probe(int n_max) { return quadratic_modes(1.15, 0.0, n_max, {L / 2, L / 2, L / 2}); }

ToyUniverse small_toy(double lambda, const Window& w = gaussian_window(1.0), int cap = 2) {
    return build_toy(probe(0), L, {0, 0, 0}, 0.0, cap, w, lambda);
}

// <H> = tr(H sigma) / 2 with H assembled here from omegas and couplings.
double energy(const ToyUniverse& toy, const Eigen::MatrixXd& sigma, double t) {
    const std::size_t M = toy.size(), np = toy.probe_count();
    Eigen::MatrixXd H = Eigen::MatrixXd::Zero(2 * M, 2 * M);
    auto w = toy.omegas();
    for (std::size_t j = 0; j < M; ++j) H(j, j) = H(M + j, M + j) = w[j];
    for (std::size_t n = 0; n < np; ++n)
        for (std::size_t k = 0; k < toy.field_count(); ++k)
            H(n, np + k) = H(np + k, n) = 2.0 * toy.coupling(t, n, k);
    return 0.5 * (H * sigma).trace();
}

Eigen::MatrixXd one_mode(double N, cd M) {
    Eigen::MatrixXd s(2, 2);
    s << N + 0.5 + M.real(), M.imag(), M.imag(), N + 0.5 - M.real();
    return s;
}

} // namespace

TEST_CASE("toy construction: couplings, overlaps, geometry") {
    auto a = build_toy(probe(0), L, {0, 0, 0}, 0.0, 2, constant_window(1.0), 0.1);
    auto b = build_toy(probe(0), L, {0, 0, 0}, 0.0, 2, constant_window(2.0), 0.1);
    auto z = build_toy(probe(0), L, {0, 0, 0}, 0.0, 2, constant_window(1.0), 0.0);
    for (std::size_t k = 0; k < a.field_count(); ++k) {
        CHECK(b.coupling(0.3, 0, k) == doctest::Approx(2.0 * a.coupling(0.3, 0, k)).epsilon(1e-15));
        CHECK(z.coupling(0.3, 0, k) == 0.0);
    }
    // Probe basis identical to the field basis: O = delta / (2 omega).
    auto same = build_toy(box_modes(2.0, 0.0, 2), 2.0, {0, 0, 0}, 0.0, 2, gaussian_window(1.0), 0.1);
    for (std::size_t n = 0; n < same.probe_count(); ++n)
        for (std::size_t k = 0; k < same.field_count(); ++k) {
            double expect = n == k ? 1.0 / (2.0 * same.probe.modes[n].omega) : 0.0;
            CHECK(std::abs(same.overlap(n, k) - expect) < 1e-13);
        }
    CHECK(throws_kind([] { build_toy(quadratic_modes(3.0, 0.0, 0, {2, 2, 2}), 4.0, {0, 0, 0}, 0.0, 2,
                                     gaussian_window(1.0), 0.1); },
                      ErrorKind::invalid_geometry));
}

TEST_CASE("zero coupling: every state is stationary in the interaction picture") {
    auto toy = small_toy(0.0);
    auto vac = GaussianState::vacuum(toy.size());
    auto ev = evolve_exact(toy, vac, -6.0, 6.0, 1000);
    CHECK((ev.interaction.covariance - vac.covariance).cwiseAbs().maxCoeff() < 1e-12);
    auto th = vac;
    th.covariance(0, 0) = th.covariance(toy.size(), toy.size()) = 1.3;
    th.covariance(2, 2) = th.covariance(toy.size() + 2, toy.size() + 2) = 0.6;
    th.covariance(2, toy.size() + 2) = th.covariance(toy.size() + 2, 2) = 0.2;
    auto ev2 = evolve_exact(toy, th, -6.0, 6.0, 1000);
    CHECK((ev2.interaction.covariance - th.covariance).cwiseAbs().maxCoeff() < 1e-11);
}

TEST_CASE("constant window: energy is conserved") {
    auto toy = small_toy(0.2, constant_window(1.0));
    auto vac = GaussianState::vacuum(toy.size());
    auto ev = evolve_exact(toy, vac, 0.0, 20.0, 4000);
    double e0 = energy(toy, vac.covariance, 0.0), e1 = energy(toy, ev.schrodinger.covariance, 20.0);
    CHECK(rel(e1, e0) < 1e-8);
    CHECK(ev.diagnostics.energy_drift < 1e-8);
}

TEST_CASE("magnus integrator converges at fourth order and stays symplectic") {
    auto toy = small_toy(0.5);
    auto vac = GaussianState::vacuum(toy.size());
    auto at = [&](std::size_t n) { return evolve_exact(toy, vac, -6.0, 6.0, n).schrodinger.covariance; };
    auto ref = at(3200);
    double e1 = (at(200) - ref).norm(), e2 = (at(400) - ref).norm();
    CHECK(e1 / e2 > 12.0);
    CHECK(e1 / e2 < 20.0);
    auto ev = evolve_exact(toy, vac, -6.0, 6.0, 400);
    CHECK(ev.diagnostics.symplectic_defect < 1e-10);
    CHECK(ev.diagnostics.purity_drift < 1e-8);
    CHECK(ev.diagnostics.uncertainty_min > -1e-8);
    CHECK(throws_kind([&] { evolve_exact(toy, vac, -6.0, 6.0, 5); }, ErrorKind::invalid_parameter));
}

TEST_CASE("single-mode tracing: vacuum, thermal, squeezed") {
    GaussianState g;
    g.covariance = Eigen::MatrixXd::Identity(2, 2) * 0.5;
    g.mean = Eigen::VectorXd::Zero(2);
    auto v = trace_to_mode(g, 0);
    CHECK(std::abs(v.state.rho(0, 0) - 1.0) < 1e-14);
    CHECK(v.state.rho.cwiseAbs().sum() - 1.0 < 1e-14);

    const double nbar = 1e-3;
    g.covariance = one_mode(nbar, 0.0);
    auto th = trace_to_mode(g, 0, 4);
    for (int n = 0; n < 4; ++n)
        CHECK(std::abs(th.state.rho(n, n).real() - std::pow(nbar, n) / std::pow(1 + nbar, n + 1)) < 1e-13);
    CHECK(rel(th.thermal_occupation, nbar) < 1e-10);

    const double r = 0.3, phi = 0.7;
    cd e = std::exp(cd(0, phi));
    g.covariance = one_mode(std::sinh(r) * std::sinh(r), -e * std::sinh(r) * std::cosh(r));
    auto sq = trace_to_mode(g, 0, 3);
    CHECK(std::abs(sq.state.rho(0, 0) - 1.0 / std::cosh(r)) < 1e-13);
    CHECK(std::abs(sq.state.rho(2, 0) - (-e * std::tanh(r) * std::sqrt(0.5)) / std::cosh(r)) < 1e-13);
    CHECK(std::abs(sq.state.rho(1, 1)) < 1e-14);
    CHECK(rel(sq.squeezing, r) < 1e-10);
    CHECK(std::abs(sq.captured - sq.state.rho.trace().real()) < 1e-15);
}

TEST_CASE("single-mode tracing reproduces the second moments of mixed squeezed states") {
    const double N = 0.08;
    const cd M(0.03, -0.05);
    GaussianState g;
    g.covariance = one_mode(N, M);
    g.mean = Eigen::VectorXd::Zero(2);
    auto t = trace_to_mode(g, 0, 30);
    cd a2 = 0.0, n = 0.0;
    for (int m = 0; m < 30; ++m) {
        n += double(m) * t.state.rho(m, m);
        if (m >= 2) a2 += t.state.rho(m, m - 2) * std::sqrt(double(m) * (m - 1));
    }
    CHECK(std::abs(n - N) < 1e-12);
    CHECK(std::abs(a2 - M) < 1e-12);
    CHECK(std::abs(t.captured - 1.0) < 1e-12);
}

TEST_CASE("fock-space reference agrees with the gaussian evolution") {
    auto toy = small_toy(0.3).restricted({0}, {0, 1, 2});
    auto ev = evolve_exact(toy, GaussianState::vacuum(toy.size()), -6.0, 6.0, 2000);
    auto gauss = trace_to_mode(ev.interaction, 0, 3).state;
    auto fock = fock_reference(toy, -6.0, 6.0, 2000, 5, 3);
    CHECK(frobenius_distance(gauss, fock) < 1e-6);
    CHECK(throws_kind([&] { fock_reference(small_toy(0.3), -6.0, 6.0, 100); }, ErrorKind::invalid_parameter));
}

TEST_CASE("field truncation bound covers the change between caps") {
    auto c2 = small_toy(0.1, gaussian_window(1.0), 2);
    auto c3 = small_toy(0.1, gaussian_window(1.0), 3);
    CHECK(std::isinf(field_truncation_bound(c2, 0.0)));
    c2.field.epsilon = c3.field.epsilon = 0.05;
    double p2 = excitation_probability(c2.coupling_config());
    double p3 = excitation_probability(c3.coupling_config());
    double bound = field_truncation_bound(c2, 0.05);
    CHECK(std::isfinite(bound));
    CHECK(std::abs(p3 - p2) <= bound);
}

TEST_CASE("power-law fit") {
    CHECK(rel(fit_exponent({0.1, 0.2, 0.4}, {3e-4, 4.8e-3, 7.68e-2}), 4.0) < 1e-12);
}

TEST_CASE("equivalence with the perturbative state at fourth order") {
    ToyScenario sc;
    sc.probe = probe(1);
    sc.box_d = L;
    auto rep = verify_equivalence(sc, {0.05, 0.025, 0.0125});
    CHECK(rep.passed);
    CHECK(rep.exponent >= 3.5);
    CHECK(rep.delta_max < 1e-3);
    REQUIRE(rep.points.size() == 3);
    CHECK(rep.points[0].delta / rep.points[1].delta == doctest::Approx(16.0).epsilon(0.2));
    for (const auto& p : rep.points) {
        CHECK(p.perturbative.valid());
        CHECK(p.exact.trace_defect() < 1e-6);
        CHECK(p.diagnostics.symplectic_defect < 1e-10);
    }

    sc.isolate = true;
    auto iso = verify_equivalence(sc, {0.05, 0.025, 0.0125});
    CHECK(iso.passed);
    CHECK(iso.exponent >= 3.5);

    CHECK(throws_kind([&] { verify_equivalence(sc, {0.05}); }, ErrorKind::invalid_parameter));
}
