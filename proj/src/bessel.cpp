#include "quasispec/bessel.hpp"

#include <algorithm>
#include <cmath>

#include "quasispec/error.hpp"

namespace quasispec {

std::vector<double> bessel_j_sequence(int max_order, double x) {
  if (max_order < 0) throw ConfigError("Bessel order must be nonnegative");
  std::vector<double> j(static_cast<std::size_t>(max_order) + 1, 0.0);
  const double ax = std::abs(x);
  if (ax == 0.0) {
    j[0] = 1.0;
    return j;
  }
  // Start well past both the requested order and the turning point k = x.
  const double reach = std::max(static_cast<double>(max_order), ax);
  int start = static_cast<int>(reach + 20.0 + 10.0 * std::cbrt(ax + 1.0));
  start += start & 1;

  double next = 0.0;   // J_{k+1}
  double cur = 1e-300; // J_k, arbitrary scale
  double norm = 0.0;
  for (int k = start; k > 0; --k) {
    if (k % 2 == 0) norm += 2.0 * cur;
    if (k <= max_order) j[static_cast<std::size_t>(k)] = cur;
    const double prev = 2.0 * k / ax * cur - next;
    next = cur;
    cur = prev;
    if (std::abs(cur) > 1e250) {
      cur *= 1e-250;
      next *= 1e-250;
      norm *= 1e-250;
      for (int i = k; i <= max_order; ++i) j[static_cast<std::size_t>(i)] *= 1e-250;
    }
  }
  norm += cur;
  j[0] = cur;
  for (auto& v : j) v /= norm;
  if (x < 0.0)
    for (std::size_t k = 1; k < j.size(); k += 2) j[k] = -j[k];
  return j;
}

int chebyshev_degree(double x, double tol) {
  if (!(tol > 0.0)) throw ConfigError("tolerance must be positive");
  const double ax = std::abs(x);
  const int guess = static_cast<int>(ax + 40.0 + 12.0 * std::cbrt(ax + 1.0));
  const auto j = bessel_j_sequence(guess, ax);
  const double small = tol / 10.0;
  int run = 0;
  for (int k = 0; k <= guess; ++k) {
    if (k > ax && std::abs(j[static_cast<std::size_t>(k)]) < small) {
      if (++run == 3) return k;
    } else {
      run = 0;
    }
  }
  // Extremely small tolerances: fall back to a longer sequence.
  const int longer = 2 * guess + 100;
  const auto jl = bessel_j_sequence(longer, ax);
  run = 0;
  for (int k = 0; k <= longer; ++k) {
    if (k > ax && std::abs(jl[static_cast<std::size_t>(k)]) < small) {
      if (++run == 3) return k;
    } else {
      run = 0;
    }
  }
  return longer;
}

}  // namespace quasispec
