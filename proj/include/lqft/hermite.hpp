#pragma once

#include <vector>

namespace lqft {

/// Orthonormal Hermite function psi_n(y) = (2^n n! sqrt(pi))^{-1/2} H_n(y) e^{-y^2/2}.
///
/// Evaluated with the three-term recurrence on the normalized functions directly,
/// carrying a running log-scale so that neither H_n(y) nor e^{-y^2/2} is formed on
/// its own. Stable well past n = 150 and for |y| where e^{-y^2/2} underflows.
double hermite_function(int n, double y);

/// psi_0(y) ... psi_n(y) in one pass.
std::vector<double> hermite_functions(int n, double y);

} // namespace lqft
