#pragma once

#include <complex>
#include <cstddef>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "quasispec/operator.hpp"
#include "quasispec/spectral.hpp"

namespace quasispec {

struct SiteAmplitude {
  long site = 0;
  std::complex<double> value;
};

/// Finitely supported state, given as (site, amplitude) pairs.
using SparseState = std::vector<SiteAmplitude>;

/// max |site| over the support (0 for an empty state).
long support_radius(const SparseState& state);
double norm(const SparseState& state);
/// S^k phi, with (S phi)(n) = phi(n + 1).
SparseState shifted(const SparseState& phi, long k);

/// Amplitudes on the lattice sites [-L, L]; index k is site k - L.
class StateVector {
 public:
  StateVector() = default;
  StateVector(int half_width, Eigen::VectorXcd amplitudes);

  static StateVector delta(long site, int half_width);
  static StateVector from_sparse(const SparseState& state, int half_width);

  [[nodiscard]] int half_width() const { return half_width_; }
  [[nodiscard]] const Eigen::VectorXcd& amplitudes() const { return amplitudes_; }
  [[nodiscard]] std::complex<double> at(long site) const;
  [[nodiscard]] double norm() const { return amplitudes_.norm(); }

 private:
  int half_width_ = 0;
  Eigen::VectorXcd amplitudes_;
};

/// <u, v> = sum_n u(n) conj(v(n)).
std::complex<double> inner(const StateVector& u, const StateVector& v);

/// Time samples of a (phase-averaged) transition amplitude.
struct AmplitudeSeries {
  std::vector<double> t;
  std::vector<std::complex<double>> values;
};

std::vector<double> linear_grid(double lo, double hi, std::size_t points);
/// Logarithmically spaced points in [lo, hi], lo > 0.
std::vector<double> log_grid(double lo, double hi, std::size_t points);

/// exp(itH) psi = Q exp(it Lambda) Q^T psi.
StateVector evolve_exact(const EigenSystem& sys, const StateVector& psi, double t);

/// Spectral rescaling used by the Chebyshev kernels: H / (2 + V).
double chebyshev_scale(const TridiagonalOperator& op);

/// Default degree budget 4 * a * |t| + 200.
int default_degree_cap(double scale, double t);

/// exp(itH) psi from the Chebyshev expansion on [-a, a], a = 2 + V.
/// Throws CapExceeded when the required degree exceeds `degree_cap`
/// (negative: default_degree_cap).
StateVector evolve_chebyshev(const TridiagonalOperator& op, const StateVector& psi, double t, double tol,
                             int degree_cap = -1);

/// m_k = <T_k(H / a) psi, phi> for k = 0..degree.
std::vector<std::complex<double>> chebyshev_moments(const TridiagonalOperator& op, const SparseState& psi,
                                                    const SparseState& phi, int degree);

/// A(t) = sum_k c_k(t) m_k with c_0 = J_0(a t), c_k = 2 i^k J_k(a t).
AmplitudeSeries amplitude_from_moments(std::span<const std::complex<double>> moments, double scale,
                                       std::span<const double> t_grid, double tol);

/// Smallest half width L for which <exp(itH_L) psi, phi> is trusted up to
/// |t| <= t_max: every path leaving the support of psi, reflecting off the
/// boundary and returning to the support of phi needs at least
/// 2L - r_psi - r_phi hops, and we require that to exceed 2 t_max + 50.
int light_cone_min_half_width(const SparseState& psi, const SparseState& phi, double t_max);
/// Throws LightConeViolation when `half_width` is below the bound above.
void check_light_cone(const SparseState& psi, const SparseState& phi, double t_max, int half_width);

struct AverageOptions {
  unsigned threads = 1;
  double tol = 1e-12;
  bool enforce_light_cone = true;
};

/// Phase-averaged amplitude  A(t) = integral over omega of <exp(itH_omega) psi, phi>,
/// evaluated exactly over phase_partition: per interval Chebyshev moments,
/// averaged with interval lengths in breakpoint order, then resummed.
AmplitudeSeries phase_averaged_amplitude(const SparseState& psi, const SparseState& phi,
                                         std::span<const double> t_grid, const ModelParams& params,
                                         const AverageOptions& options = {});

/// |direct - decomposed| where direct is the phase-averaged amplitude of psi
/// and decomposed is sum_k psi(k) * (phase-averaged amplitude of delta_0
/// against S^k phi), both on the enlarged half width L + r_psi.
double l1_decomposition_check(const SparseState& psi, const SparseState& phi, double t, const ModelParams& params,
                              const AverageOptions& options = {});

}  // namespace quasispec
