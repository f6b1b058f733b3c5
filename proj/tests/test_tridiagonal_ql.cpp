#include <doctest.h>

#include <random>

#include "quasispec/error.hpp"
#include "quasispec/spectral.hpp"

using namespace quasispec;

TEST_CASE("partial eigensystem agrees with the full decomposition") {
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int trial = 0; trial < 10; ++trial) {
    ModelParams p;
    p.coupling = 2.0 * u(rng);
    p.half_width = 20 + trial * 7;
    p.phase = u(rng);
    const auto op = build_hamiltonian(p);
    const auto full = eigendecompose(op);
    const std::size_t n = op.dimension();
    const std::size_t rows[] = {0, n / 2, n - 1, n / 3};
    const auto partial = partial_eigensystem(op, rows);
    CHECK((partial.eigenvalues - full.eigenvalues).cwiseAbs().maxCoeff() < 1e-12);
    for (int r = 0; r < 4; ++r) {
      // Eigenvectors are defined up to sign; compare squared components.
      const Eigen::VectorXd got = partial.rows.row(r).transpose().cwiseAbs2();
      const Eigen::VectorXd want = full.eigenvectors.row(static_cast<Eigen::Index>(rows[r])).transpose().cwiseAbs2();
      CHECK((got - want).cwiseAbs().maxCoeff() < 1e-12);
    }
  }
}

TEST_CASE("spectral coefficients reproduce Q^T v") {
  std::mt19937_64 rng(9);
  std::normal_distribution<double> g;
  ModelParams p;
  p.coupling = 0.5;
  p.half_width = 30;
  p.phase = 0.3;
  const auto op = build_hamiltonian(p);
  Eigen::VectorXcd v(static_cast<Eigen::Index>(op.dimension()));
  for (Eigen::Index i = 0; i < v.size(); ++i) v(i) = {g(rng), g(rng)};
  const auto sc = spectral_coefficients(op, v);
  const auto full = eigendecompose(op);
  const Eigen::VectorXcd want = full.eigenvectors.transpose() * v;
  CHECK((sc.eigenvalues - full.eigenvalues).cwiseAbs().maxCoeff() < 1e-12);
  CHECK((sc.coefficients.cwiseAbs2() - want.cwiseAbs2()).cwiseAbs().maxCoeff() < 1e-10);
  CHECK(sc.coefficients.norm() == doctest::Approx(v.norm()).epsilon(1e-12));
}

TEST_CASE("partial eigensystem edge cases") {
  const double one[] = {3.5};
  const std::size_t row0[] = {0};
  const auto s = partial_eigensystem(std::span<const double>(one), std::span<const double>(), row0);
  CHECK(s.eigenvalues(0) == 3.5);
  CHECK(s.rows(0, 0) == 1.0);

  const double d[] = {0.0, 0.0};
  const double e[] = {1.0, 1.0};
  CHECK_THROWS_AS(partial_eigensystem(d, e, row0), ConfigError);
  const std::size_t bad[] = {5};
  const double e1[] = {1.0};
  CHECK_THROWS_AS(partial_eigensystem(d, e1, bad), ConfigError);
}
