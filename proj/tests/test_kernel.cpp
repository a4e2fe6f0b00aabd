#include "lqft/kernel.hpp"
#include "lqft/quadrature.hpp"
#include "lqft/smearing.hpp"
#include "support.hpp"
#include <Eigen/Dense>
#include <doctest.h>
#include <numbers>

using namespace lqft;
using lqft_test::rel;
using lqft_test::throws_kind;
using cd = std::complex<double>;
constexpr double pi = std::numbers::pi;

namespace {

cd massless_closed(double dt, double r, double eps) {
    cd s = cd(dt, -eps);
    return 1.0 / (4.0 * pi * pi * (r * r - s * s));
}

// Equal-time massive vacuum function: m K1(m rho) / (4 pi^2 rho), rho^2 = r^2 + eps^2.
double massive_equal_time(double m, double r, double eps) {
    double rho = std::sqrt(r * r + eps * eps);
    return m * std::cyl_bessel_k(1.0, m * rho) / (4.0 * pi * pi * rho);
}

} // namespace

TEST_CASE("massless vacuum function: closed form, hermiticity, spacelike reality") {
    FieldSpec f{0.0, 1e-4};
    Event o{0.0, {0, 0, 0}};
    CHECK(rel(wightman_vacuum(f, o, Event{0.0, {1, 0, 0}}), cd(1.0 / (4 * pi * pi), 0)) < 1e-7);
    Event a{0.3, {0.1, -0.2, 0.4}}, b{-0.5, {1.0, 0.7, -0.3}};
    double r = std::sqrt(0.81 + 0.81 + 0.49);
    CHECK(rel(wightman_vacuum(f, a, b), massless_closed(0.8, r, 1e-4)) < 1e-13);
    CHECK(std::abs(wightman_vacuum(f, a, b) - std::conj(wightman_vacuum(f, b, a))) < 1e-14);
    CHECK(std::abs(wightman_vacuum(f, o, Event{0.1, {1, 0, 0}}).imag()) < 1e-6);
}

TEST_CASE("commutator: spacelike, coincident and timelike") {
    FieldSpec f{0.0, 1e-4};
    Event o{0.0, {0, 0, 0}};
    CHECK(std::abs(commutator(f, o, Event{0.0, {1, 0, 0}})) < 1e-6);
    CHECK(std::abs(commutator(f, o, o).real()) < 1e-14);
    CHECK(std::abs(commutator(f, o, o).imag()) < 1e-14);
    cd c = commutator(f, Event{1.0, {0, 0, 0}}, o);
    cd inv = 1.0 / (4.0 * pi * pi * cd(1.0, -1e-4) * cd(1.0, -1e-4));
    CHECK(rel(c, cd(0.0, -2.0 * inv.imag())) < 1e-12);
}

TEST_CASE("regulated spacelike commutator is first order in epsilon") {
    Event o{0.0, {0, 0, 0}}, b{0.6, {2, 0, 0}};
    double c1 = std::abs(commutator(FieldSpec{0.0, 1e-3}, o, b));
    double c2 = std::abs(commutator(FieldSpec{0.0, 5e-4}, o, b));
    CHECK(rel(c1 / c2, 2.0) < 1e-5);
    double bound = 1e-3 * 0.6 / (pi * pi * std::pow(4.0 - 0.36, 2));
    CHECK(rel(c1, bound) < 1e-5);
}

TEST_CASE("massive vacuum function against the modified Bessel closed form") {
    for (double m : {0.5, 1.0, 3.0})
        for (double r : {0.5, 1.0, 2.0}) {
            FieldSpec f{m, 1e-2};
            cd w = wightman_vacuum(f, Event{0, {0, 0, 0}}, Event{0, {0, r, 0}});
            CHECK(rel(w.real(), massive_equal_time(m, r, 1e-2)) < 1e-9);
            CHECK(std::abs(w.imag()) < 1e-12 * std::abs(w.real()));
        }
}

TEST_CASE("mass continuity: m = 1e-6 matches the massless kernel") {
    for (double dt : {0.0, 0.3, 1.7}) {
        Event a{dt, {0, 0, 0}}, b{0.0, {1.0, 0.5, 0}};
        cd w0 = wightman_vacuum(FieldSpec{0.0, 1e-2}, a, b);
        cd w1 = wightman_vacuum(FieldSpec{1e-6, 1e-2}, a, b);
        CHECK(rel(w1, w0) < 1e-5);
    }
}

TEST_CASE("massive kernel is hermitian and nearly causal") {
    FieldSpec f{1.0, 1e-3};
    Event a{0.2, {0, 0, 0}}, b{-0.3, {0, 0, 3.0}};
    CHECK(std::abs(wightman_vacuum(f, a, b) - std::conj(wightman_vacuum(f, b, a))) < 1e-12);
    CHECK(std::abs(commutator(f, a, b)) < 1e-6);
}

TEST_CASE("positivity: gram matrix of smeared field operators") {
    // g_i(t, x) = exp(-(t - t_i)^2) delta(x - x_i).
    FieldSpec f{0.0, 0.05};
    struct Source { double t; Vec3 x; };
    std::vector<Source> src = {{0.0, {0, 0, 0}}, {0.4, {0.3, 0, 0}}, {-1.0, {0, 1.0, 0}},
                               {2.0, {0.5, 0.5, 0.5}}, {0.1, {0, 0, 0.05}}};
    auto nw = quad::composite(-7.0, 7.0, 56, 8);
    const std::size_t n = src.size();
    Eigen::MatrixXcd G(n, n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) {
            cd s = 0.0;
            for (std::size_t p = 0; p < nw.x.size(); ++p)
                for (std::size_t q = 0; q < nw.x.size(); ++q) {
                    double t = src[i].t + nw.x[p], tp = src[j].t + nw.x[q];
                    s += nw.w[p] * nw.w[q] * std::exp(-nw.x[p] * nw.x[p] - nw.x[q] * nw.x[q]) *
                         wightman_vacuum(f, Event{t, src[i].x}, Event{tp, src[j].x});
                }
            G(i, j) = s;
        }
    CHECK((G - G.adjoint()).norm() < 1e-10 * G.norm());
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(G);
    CHECK(es.eigenvalues().minCoeff() > -1e-9 * es.eigenvalues().maxCoeff());
}

TEST_CASE("momentum density and parameter checks") {
    FieldSpec f{2.0, 1e-3};
    CHECK(rel(momentum_density(f, 1.5), 1.0 / (std::pow(2 * pi, 3) * 2.0 * 2.5)) < 1e-15);
    CHECK(throws_kind([&] { momentum_density(f, -1.0); }, ErrorKind::invalid_parameter));
    CHECK(throws_kind([] { wightman_vacuum(FieldSpec{0.0, 0.0}, Event{}, Event{}); }, ErrorKind::invalid_parameter));
    CHECK(throws_kind([] { wightman_vacuum(FieldSpec{0.0, -1.0}, Event{}, Event{}); }, ErrorKind::invalid_parameter));
}

TEST_CASE("box field sum: mode-sum oracle, boundary, tail bound") {
    BoxFieldSpec spec{1.0, 0.0, 6, {0, 0, 0}, 0.05};
    auto basis = box_modes(1.0, 0.0, 6);
    Event a{0.2, {0.3, 0.4, 0.5}}, b{-0.1, {0.6, 0.2, 0.55}};
    cd direct = 0.0;
    for (const auto& m : basis.modes) {
        double xa[3] = {a.x[0], a.x[1], a.x[2]}, xb[3] = {b.x[0], b.x[1], b.x[2]};
        direct += std::exp(cd(0, -m.omega) * cd(0.3, -0.05)) * m(xa) * m(xb);
    }
    auto w = boxfield_wightman(spec, a, b);
    CHECK(w.terms == 216);
    CHECK(rel(w.value, direct) < 1e-12);
    CHECK(std::abs(w.value - std::conj(boxfield_wightman(spec, b, a).value)) < 1e-12);
    CHECK(std::abs(boxfield_wightman(spec, Event{0.0, {0.0, 0.5, 0.5}}, b).value) == 0.0);

    BoxFieldSpec big = spec;
    big.n_cap = 24;
    auto wb = boxfield_wightman(big, a, b);
    CHECK(std::abs(wb.value - w.value) <= w.tail_bound);
    CHECK(wb.tail_bound < w.tail_bound);

    BoxFieldSpec bare = spec;
    bare.epsilon = 0.0;
    CHECK(std::isinf(boxfield_wightman(bare, a, b).tail_bound));
    CHECK(throws_kind([&] { boxfield_wightman(spec, Event{0.0, {1.5, 0.5, 0.5}}, b); }, ErrorKind::domain));
}

TEST_CASE("continuum spectral measure: equal-time smeared kernel of a gaussian mode") {
    // int Phi Phi / (4 pi^2 |x - x'|^2) = ell / (2 omega sqrt(pi)) for a ground Hermite mode.
    for (double ell : {0.2, 1.0}) {
        auto basis = quadratic_modes(ell, 0.0, 0);
        const Mode& m = basis.modes.front();
        auto mu = SpectralMeasure::continuum(
            FieldSpec{0.0, 1e-6}, [m](double k) { return radial_power(m, k); }, fourier_cutoff(m, 1e-20),
            10.0, 1e-12);
        double expect = ell / (2.0 * m.omega * std::sqrt(pi));
        CHECK(rel(mu.total_weight(), expect) < 1e-9);
        CHECK(rel(mu.smeared_wightman(0.0).real(), expect) < 1e-5);
        cd u{2.5, -0.3};
        cd via = mu.integrate([u](double w) { return std::exp(cd(0, -w) * u); }).value;
        CHECK(rel(mu.smeared_wightman(u), via) < 1e-9);
        auto prog = mu.smeared_wightman_progression(cd(-4.0, -0.2), 0.05, 161);
        for (std::size_t j = 0; j < prog.size(); j += 20)
            CHECK(rel(prog[j], mu.smeared_wightman(cd(-4.0 + 0.05 * j, -0.2))) < 1e-11);
        CHECK(throws_kind([&] { mu.smeared_wightman(cd(0.0, 0.1)); }, ErrorKind::domain));
    }
}

TEST_CASE("box field measure: overlaps against independent 1D quadrature") {
    BoxFieldSpec spec{6.0, 0.0, 4, {0, 0, 0}, 0.0};
    auto field = box_modes(6.0, 0.0, 4);
    const Mode probe = quadratic_modes(0.8, 0.0, 1, {3.0, 3.0, 3.0}).find({1, 0, 0});
    auto overlaps = box_field_overlaps(spec, field, probe);
    auto nw = quad::composite(0.0, 6.0, 24, 16);
    auto axis = [&](int which, int n) {
        double s = 0.0;
        for (std::size_t i = 0; i < nw.x.size(); ++i)
            s += nw.w[i] * evaluate(probe.axes[which], nw.x[i]) * std::sqrt(2.0 / 6.0) * std::sin(n * pi * nw.x[i] / 6.0);
        return s;
    };
    for (std::size_t j = 0; j < field.modes.size(); ++j) {
        const auto& fm = field.modes[j];
        double o = probe.prefactor() * fm.prefactor();
        for (int a = 0; a < 3; ++a) o *= axis(a, fm.index[a]);
        CHECK(std::abs(overlaps[j] - o) < 1e-13);
    }
    auto mu = box_field_measure(spec, probe);
    CHECK(mu.is_discrete());
    cd s = 0.0;
    for (std::size_t j = 0; j < field.modes.size(); ++j)
        s += overlaps[j] * overlaps[j] * std::exp(cd(0, -field.modes[j].omega * 1.3));
    CHECK(rel(mu.smeared_wightman(1.3), s) < 1e-12);
}
