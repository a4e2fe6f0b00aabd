#include "lqft/kernel.hpp"

#include "lqft/error.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

namespace lqft {

namespace {

using cd = std::complex<double>;
constexpr double pi = std::numbers::pi;

double distance(const Event& a, const Event& b) {
    double r2 = 0.0;
    for (int i = 0; i < 3; ++i) r2 += (a.x[i] - b.x[i]) * (a.x[i] - b.x[i]);
    return std::sqrt(r2);
}

void check_spec(const FieldSpec& spec) {
    require(spec.epsilon > 0.0, ErrorKind::invalid_parameter, "i-epsilon regulator must be positive");
    require(spec.mass >= 0.0, ErrorKind::invalid_parameter, "mass must be non-negative");
}

} // namespace

std::complex<double> wightman_vacuum(const FieldSpec& spec, const Event& a, const Event& b) {
    check_spec(spec);
    const double r = distance(a, b);
    const cd tau(a.t - b.t, -spec.epsilon);
    if (spec.mass == 0.0) return 1.0 / (4.0 * pi * pi * (r * r - tau * tau));

    // int_0^inf dk k^2 / (2 pi^2 2 omega) e^{-i omega tau} sinc(k r)
    const double m = spec.mass;
    const double omega_max = 35.0 / spec.epsilon + m;
    const double k_max = std::sqrt(omega_max * omega_max - m * m);
    const double oscillation = std::max(r + std::abs(a.t - b.t), spec.epsilon);
    const double width = std::min({pi / (2.0 * oscillation), 2.0 / spec.epsilon, k_max / 64.0});
    const auto panels = static_cast<std::size_t>(std::ceil(k_max / width));
    require(panels <= 2000000, ErrorKind::resolution,
            "massive Wightman radial integral needs too many panels; raise epsilon or smear first");
    const auto nw = quad::composite(0.0, k_max, panels, 16);
    cd sum = 0.0;
    for (std::size_t i = 0; i < nw.x.size(); ++i) {
        const double k = nw.x[i];
        const double omega = std::sqrt(k * k + m * m);
        const double sinc = r > 0.0 ? std::sin(k * r) / (k * r) : 1.0;
        sum += nw.w[i] * k * k / (4.0 * pi * pi * omega) * sinc * std::exp(cd(0.0, -1.0) * omega * tau);
    }
    return sum;
}

double momentum_density(const FieldSpec& spec, double k) {
    require(k >= 0.0, ErrorKind::invalid_parameter, "wavenumber magnitude must be non-negative");
    require(spec.mass >= 0.0, ErrorKind::invalid_parameter, "mass must be non-negative");
    const double omega = std::sqrt(k * k + spec.mass * spec.mass);
    return 1.0 / (std::pow(2.0 * pi, 3) * 2.0 * omega);
}

std::complex<double> commutator(const FieldSpec& spec, const Event& a, const Event& b) {
    return wightman_vacuum(spec, a, b) - wightman_vacuum(spec, b, a);
}

TruncatedSum boxfield_wightman(const BoxFieldSpec& spec, const Event& a, const Event& b) {
    require(spec.n_cap >= 1, ErrorKind::invalid_parameter, "n_cap must be at least 1");
    require(spec.epsilon >= 0.0, ErrorKind::invalid_parameter, "regulator must be non-negative");
    for (const Event* e : {&a, &b})
        for (int i = 0; i < 3; ++i)
            require(e->x[i] >= spec.origin[i] && e->x[i] <= spec.origin[i] + spec.d, ErrorKind::domain,
                    "event outside the field box");
    const auto basis = box_modes(spec.d, spec.mass, spec.n_cap, spec.origin);
    const cd tau(a.t - b.t, -spec.epsilon);
    TruncatedSum out;
    for (const auto& mode : basis.modes) {
        const double pa = mode(a.x), pb = mode(b.x);
        out.value += std::exp(cd(0.0, -1.0) * mode.omega * tau) * pa * pb;
        ++out.terms;
    }
    if (spec.epsilon == 0.0) {
        out.tail_bound = std::numeric_limits<double>::infinity();
        return out;
    }
    // Each omitted lattice point n owns the cube [n-1, n]; the summand is radially
    // decreasing, so the octant integral beyond |y| = n_cap + 1 - sqrt 3 bounds it.
    const double amp = std::pow(2.0 / spec.d, 3);
    const double m = spec.mass, d = spec.d, eps = spec.epsilon;
    auto summand = [=](double r) {
        const double omega = std::sqrt(m * m + pi * pi * r * r / (d * d));
        return amp * 0.5 * pi * r * r * std::exp(-omega * eps) / (2.0 * omega);
    };
    const double r0 = std::max(0.0, spec.n_cap + 1.0 - std::sqrt(3.0));
    const double r1 = r0 + 60.0 * d / (pi * eps);
    quad::AdaptiveOptions opt;
    opt.rel_tol = 1e-8;
    opt.abs_tol = 1e-300;
    opt.initial_intervals = 64;
    out.tail_bound = quad::adaptive(summand, r0, r1, opt).value;
    return out;
}

SpectralMeasure SpectralMeasure::continuum(const FieldSpec& field, std::function<double(double)> radial_power,
                                           double k_max, double u_max, double tol) {
    check_spec(field);
    require(k_max > 0.0, ErrorKind::invalid_parameter, "k_max must be positive");
    SpectralMeasure mu;
    mu.discrete_ = false;
    mu.epsilon_ = field.epsilon;
    mu.mass_ = field.mass;
    mu.k_max_ = k_max;
    mu.tol_ = tol;
    const double m = field.mass;
    mu.density_ = [radial_power = std::move(radial_power), m](double k) {
        const double omega = std::sqrt(k * k + m * m);
        return 4.0 * pi * k * k * radial_power(k) / (std::pow(2.0 * pi, 3) * 2.0 * omega);
    };

    auto build = [&](std::size_t panels, std::vector<double>& om, std::vector<double>& w) {
        const auto nw = quad::composite(0.0, k_max, panels, 16);
        om.resize(nw.x.size());
        w.resize(nw.x.size());
        for (std::size_t i = 0; i < nw.x.size(); ++i) {
            om[i] = std::sqrt(nw.x[i] * nw.x[i] + m * m);
            w[i] = nw.w[i] * mu.density_(nw.x[i]);
        }
    };
    auto probe = [&](const std::vector<double>& om, const std::vector<double>& w, double u) {
        cd s = 0.0;
        for (std::size_t i = 0; i < om.size(); ++i) s += w[i] * std::exp(cd(-om[i] * field.epsilon, -om[i] * u));
        return s;
    };
    auto panels = static_cast<std::size_t>(std::max(32.0, std::ceil(k_max * u_max / (2.0 * pi))));
    build(panels, mu.omegas_, mu.weights_);
    std::vector<double> om2, w2;
    build(2 * panels, om2, w2);
    double err = 0.0;
    for (double u : {0.0, 0.5 * u_max, u_max})
        err = std::max(err, std::abs(probe(mu.omegas_, mu.weights_, u) - probe(om2, w2, u)));
    mu.omegas_ = std::move(om2);
    mu.weights_ = std::move(w2);
    mu.node_error_ = err;
    return mu;
}

SpectralMeasure SpectralMeasure::discrete(std::vector<double> omegas, std::vector<double> weights,
                                          double epsilon) {
    require(omegas.size() == weights.size(), ErrorKind::invalid_parameter, "measure columns differ in length");
    require(epsilon >= 0.0, ErrorKind::invalid_parameter, "regulator must be non-negative");
    SpectralMeasure mu;
    mu.discrete_ = true;
    mu.epsilon_ = epsilon;
    mu.omegas_ = std::move(omegas);
    mu.weights_ = std::move(weights);
    return mu;
}

std::complex<double> SpectralMeasure::smeared_wightman(std::complex<double> u) const {
    require(u.imag() <= 0.0, ErrorKind::domain, "smeared Wightman continued only into Im u <= 0");
    cd s = 0.0;
    const cd z = u - cd(0.0, epsilon_);
    for (std::size_t i = 0; i < omegas_.size(); ++i) s += weights_[i] * std::exp(cd(0.0, -omegas_[i]) * z);
    return s;
}

std::vector<std::complex<double>> SpectralMeasure::smeared_wightman_progression(std::complex<double> u0,
                                                                                double step,
                                                                                std::size_t count) const {
    require(u0.imag() <= 0.0, ErrorKind::domain, "smeared Wightman continued only into Im u <= 0");
    std::vector<cd> out(count, cd(0.0));
    const cd z0 = u0 - cd(0.0, epsilon_);
    // Re-anchor the recurrence every 64 steps to keep rounding drift at the 1e-15 level.
    constexpr std::size_t block = 64;
    for (std::size_t i = 0; i < omegas_.size(); ++i) {
        const double w = weights_[i], om = omegas_[i];
        const cd rot = std::exp(cd(0.0, -om * step));
        for (std::size_t j0 = 0; j0 < count; j0 += block) {
            cd ph = w * std::exp(cd(0.0, -om) * (z0 + static_cast<double>(j0) * step));
            const std::size_t j1 = std::min(count, j0 + block);
            for (std::size_t j = j0; j < j1; ++j) {
                out[j] += ph;
                ph *= rot;
            }
        }
    }
    return out;
}

quad::Result<std::complex<double>> SpectralMeasure::integrate(
    const std::function<std::complex<double>(double)>& f) const {
    if (discrete_) {
        quad::Result<cd> r;
        for (std::size_t i = 0; i < omegas_.size(); ++i)
            r.value += weights_[i] * f(omegas_[i]) * std::exp(-omegas_[i] * epsilon_);
        r.evaluations = omegas_.size();
        return r;
    }
    quad::AdaptiveOptions opt;
    opt.abs_tol = 1e-300;
    opt.rel_tol = tol_;
    opt.initial_intervals = 32;
    opt.max_intervals = 20000;
    const double m = mass_, eps = epsilon_;
    return quad::adaptive_complex(
        [&](double k) {
            const double omega = std::sqrt(k * k + m * m);
            return density_(k) * f(omega) * std::exp(-omega * eps);
        },
        0.0, k_max_, opt);
}

double SpectralMeasure::total_weight() const {
    double s = 0.0;
    for (double w : weights_) s += w;
    return s;
}

std::vector<double> box_field_overlaps(const BoxFieldSpec& spec, const ModeBasis& field_basis,
                                       const Mode& mode) {
    require(mode.dimension() == 3, ErrorKind::invalid_parameter, "box field couples to 3D modes");
    std::vector<double> out;
    out.reserve(field_basis.modes.size());
    for (const auto& fm : field_basis.modes) {
        double o = mode.prefactor() * fm.prefactor();
        for (int a = 0; a < 3; ++a) o *= axis_overlap(mode.axes[a], fm.axes[a]);
        out.push_back(o);
    }
    (void)spec;
    return out;
}

SpectralMeasure box_field_measure(const BoxFieldSpec& spec, const Mode& mode) {
    const auto basis = box_modes(spec.d, spec.mass, spec.n_cap, spec.origin);
    const auto o = box_field_overlaps(spec, basis, mode);
    std::vector<double> om, w;
    for (std::size_t i = 0; i < o.size(); ++i) {
        om.push_back(basis.modes[i].omega);
        w.push_back(o[i] * o[i]);
    }
    return SpectralMeasure::discrete(std::move(om), std::move(w), spec.epsilon);
}

} // namespace lqft
