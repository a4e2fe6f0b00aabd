#include "lqft/hermite.hpp"

#include <cmath>
#include <numbers>

namespace lqft {

namespace {

constexpr double rescale_above = 1e150;

// Runs the normalized recurrence, returning psi_k for k <= n into `out` when non-null.
double run_recurrence(int n, double y, std::vector<double>* out) {
    // psi_k = p_k * exp(log_scale - y^2/2); p_k kept O(1) by rescaling.
    double log_scale = 0.0;
    double prev = 0.0;
    double cur = std::pow(std::numbers::pi, -0.25);
    const double envelope = -0.5 * y * y;
    auto emit = [&](int k, double p) {
        if (out) (*out)[k] = p == 0.0 ? 0.0 : p * std::exp(log_scale + envelope);
    };
    emit(0, cur);
    for (int k = 0; k < n; ++k) {
        const double next = std::sqrt(2.0 / (k + 1.0)) * y * cur - std::sqrt(k / (k + 1.0)) * prev;
        prev = cur;
        cur = next;
        if (std::abs(cur) > rescale_above) {
            cur /= rescale_above;
            prev /= rescale_above;
            log_scale += std::log(rescale_above);
        }
        emit(k + 1, cur);
    }
    if (cur == 0.0) return 0.0;
    return cur * std::exp(log_scale + envelope);
}

} // namespace

double hermite_function(int n, double y) { return run_recurrence(n, y, nullptr); }

std::vector<double> hermite_functions(int n, double y) {
    std::vector<double> out(static_cast<std::size_t>(n) + 1);
    run_recurrence(n, y, &out);
    return out;
}

} // namespace lqft
