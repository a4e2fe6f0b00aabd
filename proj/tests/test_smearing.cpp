#include "lqft/quadrature.hpp"
#include "lqft/smearing.hpp"
#include "support.hpp"
#include <doctest.h>
#include <numbers>

using namespace lqft;
using lqft_test::rel;
using lqft_test::throws_kind;
using cd = std::complex<double>;
constexpr double pi = std::numbers::pi;

namespace {

cd numeric_fourier(const Window& w, double omega) {
    auto [lo, hi] = w.support();
    auto nw = quad::composite(lo, hi, 200, 16);
    cd s = 0.0;
    for (std::size_t i = 0; i < nw.x.size(); ++i) s += nw.w[i] * w(nw.x[i]) * std::exp(cd(0, -omega * nw.x[i]));
    return s;
}

// Spherical mean of |Phi~|^2 by brute force over a Fibonacci sphere.
double sphere_mean(const Mode& m, double k, int points) {
    double s = 0.0;
    const double golden = pi * (3.0 - std::sqrt(5.0));
    for (int i = 0; i < points; ++i) {
        double z = 1.0 - (2.0 * i + 1.0) / points;
        double r = std::sqrt(1.0 - z * z), phi = golden * i;
        double kv[3] = {k * r * std::cos(phi), k * r * std::sin(phi), k * z};
        s += std::norm(m.fourier(kv));
    }
    return s / points;
}

} // namespace

TEST_CASE("gaussian window: peak, decay, square integral, transform") {
    auto w = gaussian_window(1.5);
    CHECK(w(0.0) == 1.0);
    CHECK(rel(w(3 * 1.5), std::exp(-9.0 * pi / 2.0)) < 1e-13);
    CHECK(rel(w.square_integral(), 1.5) < 1e-15);
    auto [lo, hi] = w.support();
    auto nw = quad::composite(lo, hi, 64, 16);
    double sq = 0.0;
    for (std::size_t i = 0; i < nw.x.size(); ++i) sq += nw.w[i] * w(nw.x[i]) * w(nw.x[i]);
    CHECK(rel(sq, 1.5) < 1e-13);
    for (double om : {0.0, 0.7, 3.0})
        CHECK(std::abs(w.fourier(om) - numeric_fourier(w, om)) < 1e-13);
    CHECK(rel(w.fourier(0.0).real(), std::sqrt(2.0) * 1.5) < 1e-15);
    CHECK(std::abs(w(cd(0.3, -0.2)) - std::exp(-pi * cd(0.3, -0.2) * cd(0.3, -0.2) / (2.0 * 2.25))) < 1e-15);
    CHECK(std::abs(w.fourier(w.frequency_cutoff(1e-10))) < 1.01e-10 * std::abs(w.fourier(0.0)));
    CHECK(throws_kind([] { gaussian_window(0.0); }, ErrorKind::invalid_parameter));
}

TEST_CASE("compact window: support, smoothness, transform") {
    auto w = compact_window(-2.0, 4.0);
    CHECK(w(1.0) == doctest::Approx(1.0));
    CHECK(w(-2.0) == 0.0);
    CHECK(w(4.5) == 0.0);
    CHECK(w(-1.999) < 1e-200);
    for (double om : {0.0, 1.3, 5.0})
        CHECK(std::abs(w.fourier(om) - numeric_fourier(w, om)) < 1e-10);
    auto nw = quad::composite(-2.0, 4.0, 64, 16);
    double sq = 0.0;
    for (std::size_t i = 0; i < nw.x.size(); ++i) sq += nw.w[i] * w(nw.x[i]) * w(nw.x[i]);
    CHECK(rel(w.square_integral(), sq) < 1e-9);
    CHECK(w.duration() == 6.0);
    CHECK(!w.analytic());
    CHECK(throws_kind([&] { w(cd(0.0, -0.1)); }, ErrorKind::domain));
    CHECK(throws_kind([] { compact_window(1.0, 1.0); }, ErrorKind::invalid_parameter));
}

TEST_CASE("constant window has no transform") {
    auto w = constant_window(2.0);
    CHECK(w(-100.0) == 2.0);
    CHECK(throws_kind([&] { w.fourier(1.0); }, ErrorKind::domain));
    CHECK(throws_kind([&] { w.square_integral(); }, ErrorKind::domain));
}

TEST_CASE("lambda: constant window reduces to the mode, phases and conjugation") {
    auto basis = box_modes(1.0, 0.0, 2);
    const Mode& m = basis.find({1, 2, 1});
    auto s = build_lambda(constant_window(1.0), m);
    CHECK(s.gap == m.omega);
    double x[3] = {0.3, 0.6, 0.2};
    CHECK(std::abs(s.lambda_minus(0.0, x) - cd(m(x), 0)) < 1e-15);
    auto g = build_lambda(gaussian_window(1.0), m, 0.5);
    CHECK(g.gap == 0.5 * m.omega);
    for (double t : {-1.2, 0.0, 0.4}) {
        cd lm = g.lambda_minus(t, x);
        CHECK(rel(std::abs(lm), std::exp(-pi * t * t / 2.0) * std::abs(m(x))) < 1e-14);
        CHECK(std::abs(g.lambda_plus(t, x) - std::conj(lm)) < 1e-16);
        CHECK(std::abs(std::exp(cd(0, -g.gap * t)) * g.lambda_static(t, x) - lm) < 1e-15);
    }
    CHECK(throws_kind([&] { build_lambda(gaussian_window(1.0), m, 0.0); }, ErrorKind::invalid_parameter));
}

TEST_CASE("spacetime norm of a gaussian-smeared box mode is T / (2 omega)") {
    auto basis = box_modes(1.0, 0.0, 1);
    const Mode& m = basis.modes.front();
    const double T = 0.8;
    auto s = build_lambda(gaussian_window(T), m);
    auto nt = quad::composite(-5 * T, 5 * T, 20, 16);
    auto nx = quad::composite(0.0, 1.0, 1, 16);
    double total = 0.0;
    for (std::size_t a = 0; a < nt.x.size(); ++a)
        for (std::size_t i = 0; i < nx.x.size(); ++i)
            for (std::size_t j = 0; j < nx.x.size(); ++j)
                for (std::size_t k = 0; k < nx.x.size(); ++k) {
                    double x[3] = {nx.x[i], nx.x[j], nx.x[k]};
                    total += nt.w[a] * nx.w[i] * nx.w[j] * nx.w[k] * std::norm(s.lambda_minus(nt.x[a], x));
                }
    CHECK(rel(total, T / (2.0 * m.omega)) < 1e-10);
}

TEST_CASE("spatial fourier transform: reality, gaussian width, zero mode") {
    auto basis = quadratic_modes(0.6, 0.0, 1, {0.2, -0.1, 0.4});
    const Mode& g = basis.modes.front();
    auto s = build_lambda(gaussian_window(1.0), g);
    double k[3] = {1.1, -0.4, 2.0}, mk[3] = {-1.1, 0.4, -2.0}, zero[3] = {0, 0, 0};
    CHECK(std::abs(spatial_fourier(s, mk) - std::conj(spatial_fourier(s, k))) < 1e-15);
    double k2 = 1.21 + 0.16 + 4.0;
    CHECK(rel(std::abs(spatial_fourier(s, k)) / std::abs(spatial_fourier(s, zero)), std::exp(-k2 * 0.36 / 2.0)) < 1e-13);
    auto nw = quad::composite(-6.0, 6.0, 8, 16);
    double integral = 1.0;
    for (int a = 0; a < 3; ++a) {
        double ax = 0.0;
        for (std::size_t i = 0; i < nw.x.size(); ++i) ax += nw.w[i] * evaluate(g.axes[a], nw.x[i]);
        integral *= ax;
    }
    CHECK(rel(spatial_fourier(s, zero).real(), g.prefactor() * integral) < 1e-12);
    auto box = box_modes(1.0, 0.0, 2);
    auto sb = build_lambda(gaussian_window(1.0), box.find({2, 1, 1}));
    CHECK(std::abs(spatial_fourier(sb, zero)) < 1e-15);
}

TEST_CASE("radial power: isotropy and brute-force spherical means") {
    auto basis = quadratic_modes(0.9, 0.0, 2);
    CHECK(isotropic(basis.modes.front()));
    CHECK(!isotropic(basis.find({1, 0, 0})));
    for (ModeIndex idx : {ModeIndex{0, 0, 0}, ModeIndex{1, 0, 0}, ModeIndex{2, 1, 0}})
        for (double k : {0.5, 2.0, 4.0}) {
            const Mode& m = basis.find(idx);
            CHECK(rel(radial_power(m, k), sphere_mean(m, k, 20000)) < 2e-4);
        }
    auto box = box_modes(1.0, 0.0, 2);
    CHECK(rel(radial_power(box.modes.front(), 3.0), sphere_mean(box.modes.front(), 3.0, 20000)) < 2e-4);
}

TEST_CASE("parseval: position norm equals momentum norm") {
    // int |Phi|^2 d^3x = (2 pi)^-3 int 4 pi k^2 A(k) dk.
    auto basis = quadratic_modes(0.7, 0.3, 2);
    for (ModeIndex idx : {ModeIndex{0, 0, 0}, ModeIndex{1, 0, 0}, ModeIndex{1, 1, 0}, ModeIndex{2, 0, 1}}) {
        const Mode& m = basis.find(idx);
        auto r = quad::adaptive([&](double k) { return 4.0 * pi * k * k * radial_power(m, k); }, 0.0,
                                fourier_cutoff(m, 1e-20), {1e-16, 1e-12, 4000, 16});
        CHECK(rel(r.value / std::pow(2.0 * pi, 3), 1.0 / (2.0 * m.omega)) < 1e-8);
    }
    // Sine axis in 1D: int |f|^2 dx = (1/2 pi) int |f~|^2 dk.
    AxisProfile sine = SineAxis{1.0, 2, 0.0};
    auto r = quad::adaptive([&](double k) { return std::norm(fourier(sine, k)); }, -4000.0, 4000.0,
                            {1e-14, 1e-12, 200000, 2000});
    CHECK(std::abs(r.value / (2.0 * pi) - 1.0) < 1e-6);
}
