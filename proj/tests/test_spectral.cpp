#include <doctest.h>

#include <cmath>
#include <random>

#include "oracles.hpp"
#include "quasispec/error.hpp"
#include "quasispec/measures.hpp"
#include "quasispec/spectral.hpp"

using namespace quasispec;

namespace {

ModelParams params(double v, int l, double phase = 0.0) {
  ModelParams p;
  p.coupling = v;
  p.half_width = l;
  p.phase = phase;
  return p;
}

Eigen::MatrixXd random_symmetric(std::mt19937_64& rng, int n) {
  std::normal_distribution<double> g;
  Eigen::MatrixXd a(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j <= i; ++j) a(i, j) = a(j, i) = g(rng);
  return a;
}

Eigen::VectorXcd random_state(std::mt19937_64& rng, int n, bool normalize = true) {
  std::normal_distribution<double> g;
  Eigen::VectorXcd v(n);
  for (int i = 0; i < n; ++i) v(i) = {g(rng), g(rng)};
  if (normalize) v.normalize();
  return v;
}

Eigen::VectorXcd basis(int n, int k) {
  Eigen::VectorXcd v = Eigen::VectorXcd::Zero(n);
  v(k) = 1.0;
  return v;
}

}  // namespace

TEST_CASE("eigendecompose examples") {
  Eigen::MatrixXd x(2, 2);
  x << 0, 1, 1, 0;
  const auto sx = eigendecompose(x);
  CHECK(sx.eigenvalues(0) == doctest::Approx(-1.0).epsilon(1e-15));
  CHECK(sx.eigenvalues(1) == doctest::Approx(1.0).epsilon(1e-15));

  Eigen::MatrixXd c(1, 1);
  c << 2.5;
  const auto sc = eigendecompose(c);
  CHECK(sc.eigenvalues(0) == 2.5);
  CHECK(std::abs(sc.eigenvectors(0, 0)) == 1.0);

  const auto free3 = eigendecompose(build_hamiltonian(params(0.0, 1)));
  CHECK(free3.eigenvalues(0) == doctest::Approx(-std::sqrt(2.0)).epsilon(1e-14));
  CHECK(std::abs(free3.eigenvalues(1)) < 1e-14);
  CHECK(free3.eigenvalues(2) == doctest::Approx(std::sqrt(2.0)).epsilon(1e-14));

  Eigen::MatrixXd asym(2, 2);
  asym << 0, 1, 0, 0;
  CHECK_THROWS_AS(eigendecompose(asym), ConfigError);
}

TEST_CASE("eigensystem reconstruction and orthogonality") {
  std::mt19937_64 rng(1);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int trial = 0; trial < 10; ++trial) {
    const auto p = params(2.0 * u(rng), 10 + 10 * trial, u(rng));
    const auto op = build_hamiltonian(p);
    const auto sys = eigendecompose(op);
    const auto& q = sys.eigenvectors;
    const Eigen::MatrixXd rebuilt = q * sys.eigenvalues.asDiagonal() * q.transpose();
    CHECK((rebuilt - op.to_dense()).cwiseAbs().maxCoeff() <= 1e-10 * (2.0 + p.coupling));
    const auto n = q.cols();
    CHECK((q.transpose() * q - Eigen::MatrixXd::Identity(n, n)).cwiseAbs().maxCoeff() <= 1e-10);
    for (Eigen::Index j = 1; j < n; ++j) CHECK(sys.eigenvalues(j) >= sys.eigenvalues(j - 1));
  }
}

TEST_CASE("spectral measure examples") {
  Eigen::MatrixXd x(2, 2);
  x << 0, 1, 1, 0;
  const auto m = spectral_measure(eigendecompose(x), basis(2, 0));
  REQUIRE(m.size() == 2);
  CHECK(m.atoms()[0].position == doctest::Approx(-1.0).epsilon(1e-15));
  CHECK(m.atoms()[0].weight == doctest::Approx(0.5).epsilon(1e-14));
  CHECK(m.atoms()[1].position == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(m.atoms()[1].weight == doctest::Approx(0.5).epsilon(1e-14));

  const auto zero = spectral_measure(eigendecompose(x), Eigen::VectorXcd::Zero(2));
  CHECK(zero.empty());
  CHECK(zero.total_mass() == 0.0);

  Eigen::MatrixXd c(1, 1);
  c << -0.75;
  const auto point = spectral_measure(eigendecompose(c), basis(1, 0));
  REQUIRE(point.size() == 1);
  CHECK(point.atoms()[0] == Atom{-0.75, 1.0});

  CHECK_THROWS_AS(spectral_measure(eigendecompose(x), basis(3, 0)), ConfigError);
}

TEST_CASE("spectral measure mass and moment identities") {
  std::mt19937_64 rng(2);
  std::uniform_int_distribution<int> dim(1, 30);
  for (int trial = 0; trial < 100; ++trial) {
    const int n = dim(rng);
    const Eigen::MatrixXd h = random_symmetric(rng, n);
    const Eigen::VectorXcd psi = random_state(rng, n, false);
    const auto mu = spectral_measure(eigendecompose(h), psi);
    CHECK(std::abs(mu.total_mass() - psi.squaredNorm()) <= 1e-10 * std::max(1.0, psi.squaredNorm()));
    const Eigen::VectorXcd hpsi = h * psi;
    const double first = psi.dot(hpsi).real();  // <H psi, psi>
    CHECK(std::abs(mu.moment(1) - first) <= 1e-9 * std::max(1.0, std::abs(first)));
    CHECK(std::abs(mu.moment(2) - hpsi.squaredNorm()) <= 1e-9 * std::max(1.0, hpsi.squaredNorm()));
  }
}

TEST_CASE("site spectral measure matches the full route") {
  const auto op = build_hamiltonian(params(0.5, 40, 0.77));
  const auto fast = site_spectral_measure(op, 0);
  const auto full = spectral_measure(eigendecompose(op), basis(81, 40));
  CHECK(total_variation_distance(fast, full, 1e-10) < 1e-12);
  CHECK(fast.total_mass() == doctest::Approx(1.0).epsilon(1e-13));
}

TEST_CASE("density of states examples") {
  SUBCASE("L=0 two atoms") {
    const auto dos = density_of_states(params(0.5, 0));
    REQUIRE(dos.measure.size() == 2);
    const double a = kInverseGoldenRatio;
    CHECK(dos.measure.atoms()[0].position == 0.0);
    CHECK(dos.measure.atoms()[0].weight == doctest::Approx(1.0 - a).epsilon(1e-14));
    CHECK(dos.measure.atoms()[1].position == 0.5);
    CHECK(dos.measure.atoms()[1].weight == doctest::Approx(a).epsilon(1e-14));
  }
  SUBCASE("V=0 equals the free site measure") {
    for (int l : {0, 3, 20}) {
      const auto dos = density_of_states(params(0.0, l));
      CHECK(dos.distinct_problems == 1);
      const auto free = site_spectral_measure(build_hamiltonian(params(0.0, l)), 0);
      CHECK(total_variation_distance(dos.measure, free, 1e-12) < 1e-13);
    }
  }
  SUBCASE("mass one at moderate L") {
    const auto dos = density_of_states(params(0.5, 300));
    CHECK(std::abs(dos.measure.total_mass() - 1.0) <= 1e-9);
    CHECK(dos.breakpoint_count == 602);
  }
  SUBCASE("thread count does not change the result") {
    DensityOfStatesOptions one;
    DensityOfStatesOptions four;
    four.threads = 4;
    const auto a = density_of_states(params(0.5, 30), one);
    const auto b = density_of_states(params(0.5, 30), four);
    REQUIRE(a.measure.size() == b.measure.size());
    for (std::size_t i = 0; i < a.measure.size(); ++i) CHECK(a.measure.atoms()[i] == b.measure.atoms()[i]);
  }
}

TEST_CASE("density of states at L=2000 has unit mass" * doctest::skip()) {
  const auto dos = density_of_states(params(0.5, 2000));
  CHECK(std::abs(dos.measure.total_mass() - 1.0) <= 1e-9);
}

TEST_CASE("exact DOS against naive phase quadrature") {
  const auto p = params(0.5, 10);
  const auto exact = density_of_states(p);
  for (std::size_t m : {1000u, 10000u}) {
    const auto riemann = riemann_density_of_states(p, m);
    const double tv = total_variation_distance(exact.measure, riemann, 1e-10);
    // Each breakpoint moves at most 1/M of phase mass between neighbouring intervals.
    CHECK(tv <= static_cast<double>(exact.breakpoint_count) / static_cast<double>(m));
  }
}

TEST_CASE("tensor spectral check") {
  Eigen::MatrixXd x(2, 2);
  x << 0, 1, 1, 0;
  SUBCASE("N=1") {
    const Eigen::MatrixXd f[] = {x};
    const Eigen::VectorXcd s[] = {basis(2, 0)};
    CHECK(tensor_spectral_check(f, s) == 0.0);
  }
  SUBCASE("free pair gives cos^2") {
    const Eigen::MatrixXd f[] = {x, x};
    const Eigen::VectorXcd s[] = {basis(2, 0), basis(2, 0)};
    CHECK(tensor_spectral_check(f, s) <= 1e-10);
    // The convolved side equals {-2: 1/4, 0: 1/2, 2: 1/4}, whose transform is cos^2.
    const auto mu = spectral_measure(eigendecompose(x), basis(2, 0));
    const auto conv = convolve_exact(mu, mu);
    const auto grid = default_tensor_check_grid();
    const auto tr = fourier(conv, grid);
    for (std::size_t i = 0; i < grid.size(); ++i)
      CHECK(std::abs(tr.values[i] - std::pow(std::cos(grid[i]), 2)) < 1e-12);
  }
  SUBCASE("three random 4x4 factors") {
    std::mt19937_64 rng(4);
    std::vector<Eigen::MatrixXd> f;
    std::vector<Eigen::VectorXcd> s;
    for (int k = 0; k < 3; ++k) {
      f.push_back(random_symmetric(rng, 4));
      s.push_back(random_state(rng, 4));
    }
    CHECK(tensor_spectral_check(f, s) <= 1e-9);

    // Brute force: enumerate all eigenvalue sums with product weights.
    std::vector<std::vector<Atom>> factor_atoms;
    for (int k = 0; k < 3; ++k) {
      const auto m = spectral_measure(eigendecompose(f[static_cast<std::size_t>(k)]), s[static_cast<std::size_t>(k)]);
      factor_atoms.emplace_back(m.atoms().begin(), m.atoms().end());
    }
    std::vector<Atom> brute;
    for (const auto& a : factor_atoms[0])
      for (const auto& b : factor_atoms[1])
        for (const auto& c : factor_atoms[2])
          brute.push_back({a.position + b.position + c.position, a.weight * b.weight * c.weight});
    const auto direct = spectral_measure(eigendecompose(tensor_sum(f)), tensor_product(s));
    for (double xi : {0.0, 0.7, 3.1, 12.0}) {
      const auto lhs = fourier(direct, std::vector<double>{xi}).values[0];
      CHECK(std::abs(lhs - oracle::characteristic(brute, xi)) < 1e-10);
    }
  }
  SUBCASE("cap") {
    const Eigen::MatrixXd big = Eigen::MatrixXd::Zero(65, 65);
    const Eigen::MatrixXd f[] = {big, big};
    const Eigen::VectorXcd s[] = {basis(65, 0), basis(65, 0)};
    CHECK_THROWS_AS(tensor_spectral_check(f, s), CapExceeded);
  }
}
