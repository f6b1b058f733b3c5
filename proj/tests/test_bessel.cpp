#include <doctest.h>

#include <cmath>

#include "oracles.hpp"
#include "quasispec/bessel.hpp"
#include "quasispec/error.hpp"

using namespace quasispec;

TEST_CASE("Bessel sequence against the series oracle") {
  for (double x : {0.1, 1.0, 2.5, 7.3, 20.0, 33.0}) {
    const auto j = bessel_j_sequence(60, x);
    for (int n = 0; n <= 60; ++n) CHECK(std::abs(j[static_cast<std::size_t>(n)] - oracle::bessel_series(n, x)) < 1e-14);
  }
}

TEST_CASE("Bessel sequence special cases") {
  const auto zero = bessel_j_sequence(5, 0.0);
  CHECK(zero[0] == 1.0);
  for (int n = 1; n <= 5; ++n) CHECK(zero[static_cast<std::size_t>(n)] == 0.0);

  const auto pos = bessel_j_sequence(10, 3.7);
  const auto neg = bessel_j_sequence(10, -3.7);
  for (int n = 0; n <= 10; ++n)
    CHECK(neg[static_cast<std::size_t>(n)] == (n % 2 ? -1.0 : 1.0) * pos[static_cast<std::size_t>(n)]);

  CHECK_THROWS_AS(bessel_j_sequence(-1, 1.0), ConfigError);
}

TEST_CASE("Bessel sequence at large argument") {
  for (double x : {100.0, 640.0, 2500.0}) {
    const int order = static_cast<int>(x) + 200;
    const auto j = bessel_j_sequence(order, x);
    // J_0^2 + 2 sum J_k^2 = 1 is independent of the normalization used internally.
    double squares = j[0] * j[0];
    for (std::size_t k = 1; k < j.size(); ++k) squares += 2.0 * j[k] * j[k];
    CHECK(squares == doctest::Approx(1.0).epsilon(1e-12));
    // libstdc++ is unreliable at large orders, so compare only small ones.
    for (int n : {0, 1, 7, 50, 200}) {
      const double want = std::cyl_bessel_j(static_cast<double>(n), x);
      REQUIRE(std::isfinite(want));
      CHECK(std::abs(j[static_cast<std::size_t>(n)] - want) < 1e-12);
    }
  }
}

TEST_CASE("Chebyshev degree") {
  CHECK_THROWS_AS(chebyshev_degree(1.0, 0.0), ConfigError);
  for (double x : {0.0, 1.0, 50.0, 1000.0}) {
    const int k = chebyshev_degree(x, 1e-12);
    CHECK(k > x);
    const auto j = bessel_j_sequence(k + 30, x);
    // Tail of the expansion beyond k is below the tolerance.
    double tail = 0.0;
    for (std::size_t n = static_cast<std::size_t>(k) + 1; n < j.size(); ++n) tail += 2.0 * std::abs(j[n]);
    CHECK(tail < 1e-12);
  }
  CHECK(chebyshev_degree(100.0, 1e-6) < chebyshev_degree(100.0, 1e-14));
}
