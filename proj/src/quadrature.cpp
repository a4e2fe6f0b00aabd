#include "lqft/quadrature.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <map>
#include <memory>
#include <mutex>
#include <numbers>
#include <queue>

namespace lqft::quad {

namespace {

Rule make_gauss_legendre(std::size_t n) {
    Rule r;
    if (n == 1) return Rule{{0.0}, {2.0}};
    r.nodes.resize(n);
    r.weights.resize(n);
    const std::size_t half = (n + 1) / 2;
    for (std::size_t i = 0; i < half; ++i) {
        double x = std::cos(std::numbers::pi * (static_cast<double>(i) + 0.75) /
                            (static_cast<double>(n) + 0.5));
        double dp = 0.0;
        for (int it = 0; it < 100; ++it) {
            double p0 = 1.0, p1 = x;
            for (std::size_t k = 2; k <= n; ++k) {
                const double pk = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
                p0 = p1;
                p1 = pk;
            }
            dp = n * (x * p1 - p0) / (x * x - 1.0);
            const double dx = p1 / dp;
            x -= dx;
            if (std::abs(dx) < 1e-16) break;
        }
        double p0 = 1.0, p1 = x;
        for (std::size_t k = 2; k <= n; ++k) {
            const double pk = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
            p0 = p1;
            p1 = pk;
        }
        dp = n * (x * p1 - p0) / (x * x - 1.0);
        const double w = 2.0 / ((1.0 - x * x) * dp * dp);
        r.nodes[i] = -x;
        r.nodes[n - 1 - i] = x;
        r.weights[i] = w;
        r.weights[n - 1 - i] = w;
    }
    if (n % 2 == 1) r.nodes[n / 2] = 0.0;
    return r;
}

// Kronrod 15 / Gauss 7 abscissae and weights on [-1, 1].
constexpr std::array<double, 8> xgk = {
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
    0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
    0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.000000000000000000000000000000000};
constexpr std::array<double, 8> wgk = {
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
constexpr std::array<double, 4> wg = {
    0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
    0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

template <class T>
struct Segment {
    double a, b;
    T value;
    double error;
    bool operator<(const Segment& o) const { return error < o.error; }
};

double magnitude(double v) { return std::abs(v); }
double magnitude(std::complex<double> v) { return std::abs(v); }

template <class T, class F>
Segment<T> gk15(const F& f, double a, double b) {
    const double c = 0.5 * (a + b), h = 0.5 * (b - a);
    const T fc = f(c);
    T kron = fc * wgk[7];
    T gauss = fc * wg[3];
    for (int j = 0; j < 7; ++j) {
        const double dx = h * xgk[j];
        const T s = f(c - dx) + f(c + dx);
        kron += s * wgk[j];
        if (j % 2 == 1) gauss += s * wg[j / 2];
    }
    kron *= h;
    gauss *= h;
    double err = magnitude(kron - gauss);
    // QUADPACK-style sharpening of the raw |K - G| estimate.
    err = err > 0 ? std::min(err, 200.0 * err * std::sqrt(200.0 * err / (magnitude(kron) + 1e-300)))
                  : 0.0;
    err = std::max(err, 50.0 * std::numeric_limits<double>::epsilon() * magnitude(kron));
    return {a, b, kron, err};
}

template <class T, class F>
Result<T> adaptive_impl(const F& f, double a, double b, const AdaptiveOptions& opt) {
    Result<T> res;
    if (a == b) return res;
    std::priority_queue<Segment<T>> heap;
    const std::size_t n0 = std::max<std::size_t>(1, opt.initial_intervals);
    for (std::size_t i = 0; i < n0; ++i) {
        const double lo = a + (b - a) * i / n0;
        const double hi = a + (b - a) * (i + 1) / n0;
        heap.push(gk15<T>(f, lo, hi));
        res.evaluations += 15;
    }
    auto totals = [&heap]() {
        T v{};
        double e = 0.0;
        auto copy = heap;
        while (!copy.empty()) {
            v += copy.top().value;
            e += copy.top().error;
            copy.pop();
        }
        return std::pair{v, e};
    };
    T total{};
    double error = 0.0;
    {
        auto [v, e] = totals();
        total = v;
        error = e;
    }
    while (error > std::max(opt.abs_tol, opt.rel_tol * magnitude(total)) &&
           heap.size() < opt.max_intervals) {
        const Segment<T> worst = heap.top();
        heap.pop();
        const double mid = 0.5 * (worst.a + worst.b);
        if (mid <= worst.a || mid >= worst.b) {
            heap.push(worst);
            break;
        }
        const auto left = gk15<T>(f, worst.a, mid);
        const auto right = gk15<T>(f, mid, worst.b);
        res.evaluations += 30;
        total += left.value + right.value - worst.value;
        error += left.error + right.error - worst.error;
        heap.push(left);
        heap.push(right);
    }
    // Re-sum to avoid drift from incremental updates.
    auto [v, e] = totals();
    res.value = v;
    res.error = e;
    return res;
}

} // namespace

const Rule& gauss_legendre(std::size_t n) {
    static std::mutex mutex;
    static std::map<std::size_t, std::unique_ptr<Rule>> cache;
    std::lock_guard lock(mutex);
    auto& slot = cache[n];
    if (!slot) slot = std::make_unique<Rule>(make_gauss_legendre(n));
    return *slot;
}

NodesWeights composite(double a, double b, std::size_t panels, std::size_t order) {
    const Rule& r = gauss_legendre(order);
    NodesWeights out;
    out.x.reserve(panels * order);
    out.w.reserve(panels * order);
    const double h = (b - a) / static_cast<double>(panels);
    for (std::size_t p = 0; p < panels; ++p) {
        const double c = a + (p + 0.5) * h;
        for (std::size_t q = 0; q < order; ++q) {
            out.x.push_back(c + 0.5 * h * r.nodes[q]);
            out.w.push_back(0.5 * h * r.weights[q]);
        }
    }
    return out;
}

Result<double> adaptive(const std::function<double(double)>& f, double a, double b,
                        const AdaptiveOptions& opt) {
    return adaptive_impl<double>(f, a, b, opt);
}

Result<std::complex<double>> adaptive_complex(
    const std::function<std::complex<double>(double)>& f, double a, double b,
    const AdaptiveOptions& opt) {
    return adaptive_impl<std::complex<double>>(f, a, b, opt);
}

} // namespace lqft::quad
