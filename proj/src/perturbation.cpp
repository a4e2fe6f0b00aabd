#include "lqft/perturbation.hpp"

#include "lqft/error.hpp"

#include <gsl/gsl_sf_dawson.h>

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <numbers>
#include <ostream>
#include <thread>

namespace lqft {

namespace {

using cd = std::complex<double>;
constexpr double pi = std::numbers::pi;
const double sqrt2 = std::sqrt(2.0);

const GaussianTime* gaussian(const Window& w) { return std::get_if<GaussianTime>(&w.kind); }

// Largest frequency carrying weight in the measure, used to size time panels.
double measure_bandwidth(const SpectralMeasure& mu) {
    const auto& om = mu.omegas();
    const auto& w = mu.weights();
    double wmax = 0.0;
    for (double x : w) wmax = std::max(wmax, std::abs(x));
    double band = 0.0;
    for (std::size_t i = 0; i < om.size(); ++i)
        if (std::abs(w[i]) > 1e-14 * wmax) band = std::max(band, om[i]);
    return band;
}

struct Shifts {
    double alpha = 0.0;
    double beta = 0.0;
};

// Gaussian windows: t -> t + i alpha removes the phase e^{-i a t} (alpha = -a T^2 / pi).
// The kernel needs Im(sigma (alpha - beta)) <= 0; time ordering needs alpha = beta.
Shifts contour_shifts(const Window& window, double a, double b, int sigma, Ordering ordering) {
    const auto* g = gaussian(window);
    if (g == nullptr) return {};
    const double c = g->T * g->T / pi;
    Shifts s{-a * c, -b * c};
    if (ordering == Ordering::later_first || sigma * (s.alpha - s.beta) > 0.0) {
        const double m = 0.5 * (s.alpha + s.beta);
        s = {m, m};
    }
    return s;
}

struct PairGrid {
    double lo = 0.0;
    double h = 0.0;
    std::size_t n = 0;
    std::vector<double> x;  // local nodes on [0, h]
    std::vector<double> w;
};

PairGrid make_grid(double lo, double hi, std::size_t n, std::size_t order) {
    PairGrid g;
    g.lo = lo;
    g.n = n;
    g.h = (hi - lo) / static_cast<double>(n);
    const auto& r = quad::gauss_legendre(order);
    for (std::size_t q = 0; q < order; ++q) {
        g.x.push_back(0.5 * g.h * (r.nodes[q] + 1.0));
        g.w.push_back(0.5 * g.h * r.weights[q]);
    }
    return g;
}

struct PairEstimate {
    cd value;
    double abs_mass = 0.0;  // sum |w f| * sum |w g|, for the node-error contribution
};

PairEstimate pair_on_grid(const Window& window, const SpectralMeasure& mu, double a, double b, int sigma,
                          Ordering ordering, const Shifts& sh, const PairGrid& g) {
    const std::size_t n = g.n, Q = g.x.size();
    auto f_at = [&](double t, double shift, double freq) {
        const cd z(t, shift);
        return window(z) * std::exp(cd(0.0, -freq) * z);
    };
    std::vector<cd> f(n * Q), gg(n * Q);
    double mf = 0.0, mg = 0.0;
    for (std::size_t p = 0; p < n; ++p)
        for (std::size_t q = 0; q < Q; ++q) {
            const double t = g.lo + static_cast<double>(p) * g.h + g.x[q];
            f[p * Q + q] = g.w[q] * f_at(t, sh.alpha, a);
            gg[p * Q + q] = g.w[q] * f_at(t, sh.beta, b);
            mf += std::abs(f[p * Q + q]);
            mg += std::abs(gg[p * Q + q]);
        }
    const double delta = sh.alpha - sh.beta;
    const double sgn = static_cast<double>(sigma);
    const std::size_t D = 2 * n - 1;
    // K[(q, q')][d + n - 1] = S(sigma (d h + x_q - x_q' + i delta))
    std::vector<std::vector<cd>> K(Q * Q);
    for (std::size_t q = 0; q < Q; ++q)
        for (std::size_t r = 0; r < Q; ++r) {
            const cd u0(-static_cast<double>(n - 1) * g.h + g.x[q] - g.x[r], delta);
            K[q * Q + r] = mu.smeared_wightman_progression(sgn * u0, sgn * g.h, D);
        }
    cd total = 0.0;
    for (std::size_t p = 0; p < n; ++p)
        for (std::size_t pp = 0; pp < n; ++pp) {
            if (ordering == Ordering::later_first && pp >= p) continue;
            const std::size_t d = p + n - 1 - pp;
            cd acc = 0.0;
            for (std::size_t q = 0; q < Q; ++q) {
                cd inner = 0.0;
                for (std::size_t r = 0; r < Q; ++r) inner += gg[pp * Q + r] * K[q * Q + r][d];
                acc += f[p * Q + q] * inner;
            }
            total += acc;
        }
    if (ordering == Ordering::later_first) {
        // Diagonal panel: t' = t0 + x s on the triangle t' < t, Jacobian x.
        const auto& r1 = quad::gauss_legendre(Q);
        std::vector<double> s(Q), ws(Q);
        for (std::size_t r = 0; r < Q; ++r) {
            s[r] = 0.5 * (r1.nodes[r] + 1.0);
            ws[r] = 0.5 * r1.weights[r];
        }
        std::vector<cd> Kd(Q * Q);
        for (std::size_t q = 0; q < Q; ++q)
            for (std::size_t r = 0; r < Q; ++r)
                Kd[q * Q + r] = mu.smeared_wightman(sgn * cd(g.x[q] * (1.0 - s[r]), delta));
        for (std::size_t p = 0; p < n; ++p) {
            const double t0 = g.lo + static_cast<double>(p) * g.h;
            for (std::size_t q = 0; q < Q; ++q) {
                cd inner = 0.0;
                for (std::size_t r = 0; r < Q; ++r) {
                    const double tp = t0 + g.x[q] * s[r];
                    inner += ws[r] * g.x[q] * f_at(tp, sh.beta, b) * Kd[q * Q + r];
                }
                total += f[p * Q + q] * inner;
            }
        }
    }
    return {total, mf * mg};
}

FieldSpec continuum_spec(const CouplingConfig& cfg) { return std::get<FieldSpec>(cfg.field); }

double window_abs_integral(const CouplingConfig& cfg) {
    const Window& w = cfg.smearing.window;
    if (const auto* g = gaussian(w)) return sqrt2 * g->T;
    if (const auto* c = std::get_if<ConstantTime>(&w.kind)) {
        const auto [lo, hi] = time_interval(cfg);
        return std::abs(c->value) * (hi - lo);
    }
    return std::abs(w.fourier(0.0));
}

// The measure is the expensive shared ingredient; build it once per configuration.
struct Prepared {
    SpectralMeasure mu;
};

Prepared prepare(const CouplingConfig& cfg) { return {field_measure(cfg)}; }

PathValue p_direct(const CouplingConfig& cfg, const SpectralMeasure& mu) {
    const double Om = cfg.smearing.gap;
    const auto r = pair_integral(cfg, mu, Om, -Om, +1, Ordering::full);
    const double l2 = cfg.lambda * cfg.lambda;
    return {cd(l2 * r.value.real(), 0.0), l2 * r.error};
}

PathValue p_momentum(const CouplingConfig& cfg, const SpectralMeasure& mu) {
    const double Om = cfg.smearing.gap;
    const Window& w = cfg.smearing.window;
    const auto r = mu.integrate([&](double omega) { return cd(std::norm(w.fourier(omega + Om)), 0.0); });
    const double l2 = cfg.lambda * cfg.lambda;
    return {cd(l2 * r.value.real(), 0.0), l2 * r.error};
}

PathValue c20_direct(const CouplingConfig& cfg, const SpectralMeasure& mu) {
    const double Om = cfg.smearing.gap;
    const auto r = pair_integral(cfg, mu, -Om, -Om, +1, Ordering::later_first);
    const double l2 = cfg.lambda * cfg.lambda;
    return {-sqrt2 * l2 * r.value, sqrt2 * l2 * r.error};
}

std::optional<PathValue> c20_momentum(const CouplingConfig& cfg, const SpectralMeasure& mu) {
    const auto* g = gaussian(cfg.smearing.window);
    if (g == nullptr) return std::nullopt;
    const double T = g->T, Om = cfg.smearing.gap;
    const double v_part = 2.0 * T * std::exp(-Om * Om * T * T / pi);
    const auto r = mu.integrate([&](double omega) {
        const double x = omega * T / std::sqrt(pi);
        return 0.5 * v_part * cd(T * std::exp(-x * x), -2.0 * T / std::sqrt(pi) * gsl_sf_dawson(x));
    });
    const double l2 = cfg.lambda * cfg.lambda;
    return PathValue{-sqrt2 * l2 * r.value, sqrt2 * l2 * r.error};
}

ResponsePoint assemble_point(const CouplingConfig& cfg, const SpectralMeasure& mu) {
    ResponsePoint pt;
    pt.Omega = cfg.smearing.gap;
    const auto d = p_direct(cfg, mu);
    const auto m = p_momentum(cfg, mu);
    pt.P_direct = d.value.real();
    pt.P_momentum = m.value.real();
    pt.P = pt.P_momentum;
    pt.err = m.error;
    const double diff = std::abs(pt.P_direct - pt.P_momentum);
    pt.path_delta = pt.P != 0.0 ? diff / std::abs(pt.P) : diff;
    const double combined = d.error + m.error + cfg.quad.rel_tol * std::abs(pt.P);
    pt.consistent = diff <= 10.0 * combined;
    const auto cm = c20_momentum(cfg, mu);
    const auto c = cm ? *cm : c20_direct(cfg, mu);
    pt.C20 = c.value;
    pt.err_C20 = c.error;
    pt.cauchy_schwarz = std::sqrt(std::max(0.0, 2.0 * pt.P * (1.0 - pt.P)));
    const double l2 = cfg.lambda * cfg.lambda;
    const double scale = l2 * std::abs(mu.total_weight()) * std::pow(window_abs_integral(cfg), 2);
    pt.perturbative = scale < 0.1;
    return pt;
}

Eigen::MatrixXcd ladder(int dim) {
    Eigen::MatrixXcd a = Eigen::MatrixXcd::Zero(dim, dim);
    for (int n = 1; n < dim; ++n) a(n - 1, n) = std::sqrt(static_cast<double>(n));
    return a;
}

} // namespace

std::pair<double, double> time_interval(const CouplingConfig& cfg) {
    if (cfg.quad.t_range > 0.0) return {-cfg.quad.t_range, cfg.quad.t_range};
    return cfg.smearing.window.support();
}

SpectralMeasure field_measure(const CouplingConfig& cfg) {
    const Mode& mode = cfg.smearing.mode;
    if (const auto* box = std::get_if<BoxFieldSpec>(&cfg.field)) return box_field_measure(*box, mode);
    const FieldSpec f = continuum_spec(cfg);
    require(f.epsilon <= cfg.smearing.window.duration() / 100.0, ErrorKind::invalid_parameter,
            "regulator epsilon must not exceed T/100");
    require(mode.dimension() == 3, ErrorKind::invalid_parameter, "continuum coupling needs a 3D mode");
    const double k_max = cfg.quad.k_max > 0.0 ? cfg.quad.k_max : fourier_cutoff(mode, 1e-20);
    const auto [lo, hi] = time_interval(cfg);
    return SpectralMeasure::continuum(
        f, [mode](double k) { return radial_power(mode, k); }, k_max, hi - lo, cfg.quad.rel_tol);
}

PathValue pair_integral(const CouplingConfig& cfg, const SpectralMeasure& mu, double a, double b, int sigma,
                        Ordering ordering) {
    require(sigma == 1 || sigma == -1, ErrorKind::invalid_parameter, "sigma must be +1 or -1");
    const Window& window = cfg.smearing.window;
    const auto [lo, hi] = time_interval(cfg);
    const Shifts sh = contour_shifts(window, a, b, sigma, ordering);
    const std::size_t order = cfg.quad.time_order;
    std::size_t n = cfg.quad.time_panels;
    if (n == 0) {
        double band = measure_bandwidth(mu);
        if (!gaussian(window) || ordering == Ordering::later_first || sh.alpha == sh.beta)
            band += std::max(std::abs(a), std::abs(b));
        const double h = std::min(0.25 * window.duration(), band > 0.0 ? 8.0 / band : 1e300);
        n = std::max<std::size_t>(8, static_cast<std::size_t>(std::ceil((hi - lo) / h)));
    }
    auto est = pair_on_grid(window, mu, a, b, sigma, ordering, sh, make_grid(lo, hi, n, order));
    double err = std::abs(est.value);
    for (int r = 0; r < cfg.quad.max_refinements; ++r) {
        n *= 2;
        const auto next = pair_on_grid(window, mu, a, b, sigma, ordering, sh, make_grid(lo, hi, n, order));
        err = std::abs(next.value - est.value);
        est = next;
        if (err <= cfg.quad.rel_tol * std::abs(est.value)) break;
    }
    return {est.value, err + mu.node_error() * est.abs_mass};
}

PathValue excitation_probability_direct(const CouplingConfig& cfg) {
    const auto prep = prepare(cfg);
    return p_direct(cfg, prep.mu);
}

PathValue excitation_probability_momentum(const CouplingConfig& cfg) {
    const auto prep = prepare(cfg);
    return p_momentum(cfg, prep.mu);
}

ResponsePoint evaluate_point(const CouplingConfig& cfg) {
    const auto prep = prepare(cfg);
    return assemble_point(cfg, prep.mu);
}

double excitation_probability(const CouplingConfig& cfg) {
    const auto pt = evaluate_point(cfg);
    if (!pt.consistent) {
        char buf[160];
        std::snprintf(buf, sizeof buf, "direct P = %.12g and momentum P = %.12g disagree", pt.P_direct,
                      pt.P_momentum);
        fail(ErrorKind::consistency, buf);
    }
    return pt.P;
}

PathValue coherence_02_direct(const CouplingConfig& cfg) {
    const auto prep = prepare(cfg);
    return c20_direct(cfg, prep.mu);
}

std::optional<PathValue> coherence_02_momentum(const CouplingConfig& cfg) {
    if (!gaussian(cfg.smearing.window)) return std::nullopt;
    const auto prep = prepare(cfg);
    return c20_momentum(cfg, prep.mu);
}

PathValue coherence_02(const CouplingConfig& cfg) {
    const auto prep = prepare(cfg);
    if (auto m = c20_momentum(cfg, prep.mu)) return *m;
    return c20_direct(cfg, prep.mu);
}

PathValue coherence_02_mirrored(const CouplingConfig& cfg) {
    const auto prep = prepare(cfg);
    const double Om = cfg.smearing.gap;
    // theta(t' - t) S(t - t') Lambda^-(t) Lambda^-(t'), relabelled onto the t > t' triangle.
    const auto r = pair_integral(cfg, prep.mu, Om, Om, -1, Ordering::later_first);
    const double l2 = cfg.lambda * cfg.lambda;
    return {-sqrt2 * l2 * r.value, sqrt2 * l2 * r.error};
}

double ReducedState::trace_defect() const { return std::abs(rho.trace() - cd(1.0)); }

double ReducedState::hermiticity_residual() const {
    return (rho - rho.adjoint()).cwiseAbs().maxCoeff();
}

Eigen::VectorXd ReducedState::eigenvalues() const {
    const Eigen::MatrixXcd h = 0.5 * (rho + rho.adjoint());
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(h, Eigen::EigenvaluesOnly);
    return es.eigenvalues();
}

double ReducedState::min_eigenvalue() const { return eigenvalues().minCoeff(); }

bool ReducedState::valid() const {
    return hermiticity_residual() <= 1e-12 && trace_defect() <= 1e-12 && min_eigenvalue() >= -10.0 * tolerance;
}

ReducedState vacuum_state(int dim) {
    require(dim >= 1, ErrorKind::invalid_parameter, "Fock truncation must be at least 1");
    ReducedState s;
    s.dim = dim;
    s.rho = Eigen::MatrixXcd::Zero(dim, dim);
    s.rho(0, 0) = 1.0;
    return s;
}

ReducedState reduced_state(const CouplingConfig& cfg, int dim) {
    require(dim >= 3, ErrorKind::invalid_parameter, "the second-order state needs levels 0, 1, 2");
    ReducedState s = vacuum_state(dim);
    s.tolerance = cfg.quad.abs_tol;
    if (cfg.lambda == 0.0) return s;
    const auto pt = evaluate_point(cfg);
    if (!pt.consistent) {
        char buf[160];
        std::snprintf(buf, sizeof buf, "direct P = %.12g and momentum P = %.12g disagree", pt.P_direct,
                      pt.P_momentum);
        fail(ErrorKind::consistency, buf);
    }
    s.rho(0, 0) = 1.0 - pt.P;
    s.rho(1, 1) = pt.P;
    s.rho(2, 0) = pt.C20;
    s.rho(0, 2) = std::conj(pt.C20);
    return s;
}

ReducedState udw_reduced_state(const CouplingConfig& cfg, int dim, const std::optional<Eigen::MatrixXcd>& rho0) {
    require(dim >= 2, ErrorKind::invalid_parameter, "oscillator truncation must be at least 2");
    ReducedState s = vacuum_state(dim);
    s.tolerance = cfg.quad.abs_tol;
    if (rho0) {
        require(rho0->rows() == dim && rho0->cols() == dim, ErrorKind::invalid_parameter,
                "initial detector state has the wrong dimension");
        s.rho = *rho0;
    }
    if (cfg.lambda == 0.0) return s;
    const Eigen::MatrixXcd r0 = s.rho;
    const Eigen::MatrixXcd a = ladder(dim);
    const Eigen::MatrixXcd ad = a.adjoint();
    const Eigen::MatrixXcd* A[2] = {&a, &ad};  // r = -1 (a), r = +1 (a^dagger)
    const double Om = cfg.smearing.gap;
    const double l2 = cfg.lambda * cfg.lambda;
    const auto prep = prepare(cfg);
    Eigen::MatrixXcd out = r0;
    for (int ri = 0; ri < 2; ++ri)
        for (int si = 0; si < 2; ++si) {
            const double r = ri == 0 ? -1.0 : 1.0, sg = si == 0 ? -1.0 : 1.0;
            const Eigen::MatrixXcd& Ar = *A[ri];
            const Eigen::MatrixXcd& As = *A[si];
            // c_r(t) = zeta(t) e^{i r Omega t}, i.e. phase parameter a = -r Omega
            const Eigen::MatrixXcd t1 = Ar * r0 * As;
            if (t1.cwiseAbs().maxCoeff() > 0.0)
                out += l2 * pair_integral(cfg, prep.mu, -r * Om, -sg * Om, -1, Ordering::full).value * t1;
            const Eigen::MatrixXcd t2 = Ar * As * r0;
            if (t2.cwiseAbs().maxCoeff() > 0.0)
                out -= l2 * pair_integral(cfg, prep.mu, -r * Om, -sg * Om, +1, Ordering::later_first).value * t2;
            const Eigen::MatrixXcd t3 = r0 * As * Ar;
            if (t3.cwiseAbs().maxCoeff() > 0.0)
                out -= l2 * pair_integral(cfg, prep.mu, -r * Om, -sg * Om, -1, Ordering::later_first).value * t3;
        }
    s.rho = out;
    return s;
}

double frobenius_distance(const ReducedState& a, const ReducedState& b) {
    require(a.dim == b.dim, ErrorKind::invalid_parameter, "states of different truncation");
    return (a.rho - b.rho).norm();
}

SpuriousResidual spurious_term_residual(const CouplingConfig& cfg, const std::vector<Mode>& other_modes,
                                        ThetaMode mode, std::size_t grid_points) {
    SpuriousResidual out;
    if (mode == ThetaMode::symbolic) return out;
    const double l2 = cfg.lambda * cfg.lambda;
    double worst = -1.0;
    for (const Mode& m : other_modes) {
        require(m.index != cfg.smearing.mode.index, ErrorKind::invalid_parameter,
                "traced modes must exclude the accessible mode");
        CouplingConfig c = cfg;
        c.smearing = build_lambda(cfg.smearing.window, m, cfg.smearing.redshift);
        const auto prep = prepare(c);
        const double w = c.smearing.gap;
        // Uniform grid: S depends on i - j only.
        std::vector<double> t, wt;
        std::vector<cd> S;
        if (mode == ThetaMode::grid) {
            require(grid_points >= 2, ErrorKind::invalid_parameter, "theta grid needs two points");
            const auto [lo, hi] = time_interval(c);
            const double h = (hi - lo) / static_cast<double>(grid_points - 1);
            t.resize(grid_points);
            wt.assign(grid_points, h);
            for (std::size_t i = 0; i < grid_points; ++i) t[i] = lo + h * static_cast<double>(i);
            wt.front() = wt.back() = 0.5 * h;
            S = prep.mu.smeared_wightman_progression(cd(-(hi - lo), 0.0), h, 2 * grid_points - 1);
        }
        for (double r : {-1.0, 1.0})
            for (double s : {-1.0, 1.0}) {
                const double a = -r * w, b = -s * w;
                double res = 0.0, scale = 0.0;
                if (mode == ThetaMode::grid) {
                    const Window& win = c.smearing.window;
                    auto theta = [](double u) { return u > 0.0 ? 1.0 : (u < 0.0 ? 0.0 : 0.5); };
                    cd full = 0.0, spurious = 0.0;
                    for (std::size_t i = 0; i < grid_points; ++i)
                        for (std::size_t j = 0; j < grid_points; ++j) {
                            const double u = static_cast<double>(i) - static_cast<double>(j);
                            const cd k = wt[i] * wt[j] * win(t[i]) * win(t[j]) *
                                         std::exp(cd(0.0, -a * t[i] - b * t[j])) * S[i + grid_points - 1 - j];
                            full += k;
                            spurious += k * (1.0 - theta(u) - theta(-u));
                        }
                    res = std::abs(spurious);
                    scale = std::abs(full);
                } else {
                    const auto F = pair_integral(c, prep.mu, a, b, +1, Ordering::full).value;
                    const auto Tg = pair_integral(c, prep.mu, a, b, +1, Ordering::later_first).value;
                    const auto Tl = pair_integral(c, prep.mu, b, a, -1, Ordering::later_first).value;
                    res = std::abs(F - Tg - Tl);
                    scale = std::max({std::abs(F), std::abs(Tg), std::abs(Tl)});
                }
                const double ratio = scale > 0.0 ? res / scale : res;
                if (ratio > worst) {
                    worst = ratio;
                    out.residual = l2 * res;
                    out.scale = l2 * scale;
                }
            }
    }
    return out;
}

std::vector<ResponsePoint> response_curve(const CouplingConfig& base, const std::vector<double>& gaps,
                                          unsigned threads) {
    for (std::size_t i = 0; i < gaps.size(); ++i) {
        require(std::isfinite(gaps[i]), ErrorKind::invalid_parameter, "gap values must be finite");
        require(i == 0 || gaps[i] >= gaps[i - 1], ErrorKind::invalid_parameter, "gap values must be sorted");
    }
    std::vector<ResponsePoint> out(gaps.size());
    std::optional<SpectralMeasure> shared;
    std::string shared_error;
    try {
        shared = field_measure(base);
    } catch (const Error& e) {
        shared_error = e.what();
    }
    std::atomic<std::size_t> next{0};
    auto worker = [&] {
        for (std::size_t i = next++; i < gaps.size(); i = next++) {
            CouplingConfig c = base;
            c.smearing.gap = gaps[i];
            try {
                if (!shared) fail(ErrorKind::invalid_parameter, shared_error);
                out[i] = assemble_point(c, *shared);
            } catch (const Error& e) {
                out[i] = ResponsePoint{};
                out[i].Omega = gaps[i];
                out[i].consistent = false;
                out[i].failure = e.what();
            }
        }
    };
    const unsigned nt = std::max(1u, std::min<unsigned>(threads, static_cast<unsigned>(gaps.size())));
    std::vector<std::thread> pool;
    for (unsigned t = 1; t < nt; ++t) pool.emplace_back(worker);
    worker();
    for (auto& t : pool) t.join();
    return out;
}

double probe_length(const Mode& mode) {
    if (mode.axes.empty()) return 0.0;
    const auto& a = mode.axes[0];
    if (const auto* h = std::get_if<HermiteAxis>(&a)) return h->ell;
    if (const auto* s = std::get_if<SineAxis>(&a)) return s->length;
    const auto& g = std::get<GridAxis>(a);
    return g.grid->x.back() - g.grid->x.front();
}

void write_response_csv(std::ostream& out, const CouplingConfig& base, const std::vector<ResponsePoint>& points,
                        bool header) {
    if (header) out << "Omega,T,ell,lambda,P,err_P,Re_C20,Im_C20,path_delta\n";
    const double T = base.smearing.window.duration();
    const double ell = probe_length(base.smearing.mode);
    char buf[512];
    for (const auto& p : points) {
        std::snprintf(buf, sizeof buf, "%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g\n", p.Omega, T, ell,
                      base.lambda, p.P, p.err, p.C20.real(), p.C20.imag(), p.path_delta);
        out << buf;
    }
}

} // namespace lqft
