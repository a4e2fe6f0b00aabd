#pragma once
#include "lqft/error.hpp"
#include <algorithm>
#include <cmath>
#include <complex>

namespace lqft_test {

inline double rel(double a, double b) { return std::abs(a - b) / std::max(std::abs(b), 1e-300); }
inline double rel(std::complex<double> a, std::complex<double> b) {
    return std::abs(a - b) / std::max(std::abs(b), 1e-300);
}

// True when f throws an lqft::Error of the given kind.
template <class F>
bool throws_kind(F&& f, lqft::ErrorKind kind) {
    try {
        f();
    } catch (const lqft::Error& e) {
        return e.kind() == kind;
    }
    return false;
}

} // namespace lqft_test
