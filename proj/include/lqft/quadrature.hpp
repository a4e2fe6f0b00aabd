#pragma once

// Numerical quadrature primitives shared by every module: Gauss-Legendre rules,
// composite rules on uniform panels, and an adaptive Gauss-Kronrod integrator
// that works for real and complex integrands alike.

#include <complex>
#include <cstddef>
#include <functional>
#include <span>
#include <vector>

namespace lqft::quad {

struct Rule {
    std::vector<double> nodes;   // on [-1, 1]
    std::vector<double> weights;
};

// n-point Gauss-Legendre rule; cached per n (thread-safe).
const Rule& gauss_legendre(std::size_t n);

struct NodesWeights {
    std::vector<double> x;
    std::vector<double> w;
};

// Composite Gauss-Legendre on [a, b] with `panels` equal panels.
NodesWeights composite(double a, double b, std::size_t panels, std::size_t order);

template <class T>
struct Result {
    T value{};
    double error = 0.0;
    std::size_t evaluations = 0;
};

struct AdaptiveOptions {
    double abs_tol = 1e-12;
    double rel_tol = 1e-10;
    std::size_t max_intervals = 4000;
    std::size_t initial_intervals = 1;
};

Result<double> adaptive(const std::function<double(double)>& f, double a, double b,
                        const AdaptiveOptions& opt = {});

Result<std::complex<double>> adaptive_complex(
    const std::function<std::complex<double>(double)>& f, double a, double b,
    const AdaptiveOptions& opt = {});

} // namespace lqft::quad
