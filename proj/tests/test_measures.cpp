#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "oracles.hpp"
#include "quasispec/error.hpp"
#include "quasispec/measures.hpp"

using namespace quasispec;

namespace {

AtomicMeasure coin() { return AtomicMeasure({{-1.0, 0.5}, {1.0, 0.5}}); }

}  // namespace

TEST_CASE("atomic measure construction") {
  const AtomicMeasure m({{1.0, 0.25}, {-1.0, 0.5}, {1.0 + 1e-13, 0.25}, {3.0, 0.0}});
  REQUIRE(m.size() == 2);
  CHECK(m.atoms()[0] == Atom{-1.0, 0.5});
  CHECK(m.atoms()[1].position == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(m.atoms()[1].weight == 0.5);
  CHECK(m.total_mass() == 1.0);
  CHECK(m.moment(0) == 1.0);
  CHECK(m.moment(1) == doctest::Approx(0.0).epsilon(1e-12));
  CHECK_THROWS_AS(AtomicMeasure({{0.0, -1.0}}), ConfigError);

  AtomicMeasure pruned({{0.0, 1.0}, {1.0, 1e-20}});
  pruned.prune(1e-15);
  CHECK(pruned.size() == 1);
  CHECK(pruned.dropped_mass() == 1e-20);
}

TEST_CASE("total variation distance") {
  CHECK(total_variation_distance(coin(), coin()) == 0.0);
  CHECK(total_variation_distance(AtomicMeasure::point_mass(0.0), AtomicMeasure::point_mass(1.0)) == 1.0);
  const AtomicMeasure a({{0.0, 0.75}, {1.0, 0.25}});
  CHECK(total_variation_distance(a, coin()) == doctest::Approx(0.75).epsilon(1e-15));
  CHECK(total_variation_distance(a, AtomicMeasure({{0.0, 0.5}, {1.0, 0.5}})) == doctest::Approx(0.25));
}

TEST_CASE("fourier examples") {
  const double xi[] = {0.0, 1.0, 2.5};
  SUBCASE("point mass at zero") {
    const auto tr = fourier(AtomicMeasure::point_mass(0.0), xi);
    for (const auto& v : tr.values) CHECK(v == std::complex<double>(1.0, 0.0));
  }
  SUBCASE("symmetric coin is cos") {
    const auto tr = fourier(coin(), xi);
    for (std::size_t i = 0; i < 3; ++i) {
      CHECK(std::abs(tr.values[i] - std::cos(xi[i])) < 1e-15);
    }
  }
  SUBCASE("sign convention") {
    const auto tr = fourier(AtomicMeasure::point_mass(1.0), std::vector<double>{std::numbers::pi / 2});
    CHECK(std::abs(tr.values[0] - std::complex<double>(0.0, 1.0)) < 1e-15);
  }
  SUBCASE("grid validation") {
    CHECK_THROWS_AS(fourier(coin(), std::vector<double>{1.0, 1.0}), ConfigError);
    CHECK_THROWS_AS(fourier(coin(), std::vector<double>{2.0, 1.0}), ConfigError);
    CHECK(fourier(coin(), std::vector<double>{}).values.empty());
  }
  SUBCASE("against the long double oracle with threads") {
    std::mt19937_64 rng(21);
    const auto atoms = oracle::random_atoms(rng, 500);
    const AtomicMeasure m(atoms);
    std::vector<double> grid;
    for (int i = 0; i < 300; ++i) grid.push_back(0.1 * i);
    FourierOptions opts;
    opts.threads = 3;
    const auto tr = fourier(m, grid, opts);
    const auto serial = fourier(m, grid);
    for (std::size_t i = 0; i < grid.size(); ++i) {
      CHECK(std::abs(tr.values[i] - oracle::characteristic(atoms, grid[i])) < 1e-12);
      CHECK(tr.values[i] == serial.values[i]);
    }
  }
}

TEST_CASE("convolve_exact") {
  SUBCASE("coin squared") {
    const auto c = convolve_exact(coin(), coin());
    REQUIRE(c.size() == 3);
    CHECK(c.atoms()[0] == Atom{-2.0, 0.25});
    CHECK(c.atoms()[1] == Atom{0.0, 0.5});
    CHECK(c.atoms()[2] == Atom{2.0, 0.25});
  }
  SUBCASE("identity and empty") {
    const auto c = convolve_exact(coin(), AtomicMeasure::point_mass(0.0));
    CHECK(total_variation_distance(c, coin()) == 0.0);
    CHECK(convolve_exact(coin(), AtomicMeasure()).empty());
  }
  SUBCASE("against enumeration") {
    std::mt19937_64 rng(22);
    const auto a = oracle::random_atoms(rng, 7);
    const auto b = oracle::random_atoms(rng, 9);
    const auto c = convolve_exact(AtomicMeasure(a), AtomicMeasure(b));
    const auto expected = oracle::enumerate_sums({a, b});
    REQUIRE(c.size() == expected.size());
    std::size_t i = 0;
    for (const auto& [key, w] : expected) {
      CHECK(std::abs(c.atoms()[i].position - static_cast<double>(key) * 1e-9) < 1e-8);
      CHECK(c.atoms()[i].weight == doctest::Approx(w).epsilon(1e-13));
      ++i;
    }
  }
  SUBCASE("pair cap") {
    ConvolutionOptions opts;
    opts.pair_cap = 3;
    CHECK_THROWS_AS(convolve_exact(coin(), coin(), opts), CapExceeded);
  }
  SUBCASE("dropped mass propagates") {
    AtomicMeasure a({{0.0, 1.0}, {1.0, 1e-20}});
    a.prune(1e-15);
    const auto c = convolve_exact(a, coin());
    CHECK(c.dropped_mass() > 0.0);
  }
}

TEST_CASE("binomial convolution power") {
  const double expected[] = {1, 4, 6, 4, 1};
  for (auto mode : {ConvolutionMode::exact, ConvolutionMode::binned}) {
    const auto c = convolution_power(coin(), 4, mode, 1e-3);
    REQUIRE(c.size() == 5);
    for (int k = 0; k < 5; ++k) {
      CHECK(c.atoms()[static_cast<std::size_t>(k)].position == doctest::Approx(-4.0 + 2.0 * k).epsilon(1e-12));
      CHECK(c.atoms()[static_cast<std::size_t>(k)].weight == doctest::Approx(expected[k] / 16.0).epsilon(1e-14));
    }
  }
  CHECK(total_variation_distance(convolution_power(coin(), 1, ConvolutionMode::exact), coin()) == 0.0);
  CHECK_THROWS_AS(convolution_power(coin(), 0, ConvolutionMode::exact), ConfigError);
  CHECK_THROWS_AS(convolution_power(coin(), 2, ConvolutionMode::binned, 0.0), ConfigError);
}

TEST_CASE("convolution theorem on random measures") {
  std::mt19937_64 rng(23);
  std::uniform_int_distribution<int> count(1, 30);
  std::uniform_real_distribution<double> xi(-20.0, 20.0);
  for (int trial = 0; trial < 100; ++trial) {
    const AtomicMeasure a(oracle::random_atoms(rng, count(rng)));
    const AtomicMeasure b(oracle::random_atoms(rng, count(rng)));
    const auto c = convolve_exact(a, b);
    CHECK(c.total_mass() == doctest::Approx(a.total_mass() * b.total_mass()).epsilon(1e-13));
    const double x[] = {xi(rng)};
    const auto lhs = fourier(c, x).values[0];
    const auto rhs = fourier(a, x).values[0] * fourier(b, x).values[0];
    CHECK(std::abs(lhs - rhs) <= 1e-12 * a.total_mass() * b.total_mass() * 10.0);
  }
}

TEST_CASE("binned convolution") {
  std::mt19937_64 rng(24);
  const AtomicMeasure a(oracle::random_atoms(rng, 40));
  const AtomicMeasure b(oracle::random_atoms(rng, 40));
  const double h = 1e-3;
  const auto exact = convolve_exact(a, b);
  const auto binned = convolve_binned(a, b, h);
  CHECK(binned.total_mass() == doctest::Approx(exact.total_mass()).epsilon(1e-13));
  // Moving every atom by at most h changes the transform by at most |xi| h * mass.
  const double grid[] = {0.5, 5.0, 50.0};
  const auto te = fourier(exact, grid);
  const auto tb = fourier(binned, grid);
  for (int i = 0; i < 3; ++i) CHECK(std::abs(te.values[i] - tb.values[i]) <= grid[i] * h * exact.total_mass());

  const auto lattice = bin_to_lattice(AtomicMeasure({{0.0004, 1.0}, {0.0016, 2.0}}), h);
  REQUIRE(lattice.size() == 2);
  CHECK(lattice.atoms()[0] == Atom{0.0, 1.0});
  CHECK(lattice.atoms()[1] == Atom{0.002, 2.0});
  CHECK(default_bin_width(0.5) == doctest::Approx(5e-4));
}
