#pragma once

#include <vector>

namespace quasispec {

/// J_0(x), ..., J_max_order(x) for real x by Miller's backward recurrence,
/// normalized with J_0 + 2 sum_k J_2k = 1.
std::vector<double> bessel_j_sequence(int max_order, double x);

/// Chebyshev degree needed to expand exp(i x y), y in [-1, 1], to tolerance
/// `tol`: the coefficients are 2 i^k J_k(x), and the expansion stops once three
/// consecutive |J_k(x)| past k = |x| fall below tol / 10.
int chebyshev_degree(double x, double tol);

}  // namespace quasispec
