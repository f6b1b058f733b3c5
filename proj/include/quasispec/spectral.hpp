#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "quasispec/atomic_measure.hpp"
#include "quasispec/operator.hpp"

namespace quasispec {

/// Full eigendecomposition H = Q diag(eigenvalues) Q^T, eigenvalues ascending.
struct EigenSystem {
  Eigen::VectorXd eigenvalues;
  Eigen::MatrixXd eigenvectors;  // column j belongs to eigenvalues(j)

  [[nodiscard]] Eigen::Index dimension() const { return eigenvalues.size(); }
};

EigenSystem eigendecompose(const TridiagonalOperator& op);
/// Dense symmetric input; throws ConfigError when the matrix is not symmetric.
EigenSystem eigendecompose(const Eigen::MatrixXd& symmetric);

/// Eigenvalues of a tridiagonal operator together with selected rows of the
/// eigenvector matrix, computed without forming the full matrix.
struct PartialEigenSystem {
  Eigen::VectorXd eigenvalues;  // ascending
  Eigen::MatrixXd rows;         // rows(r, j) = component of eigenvector j at the r-th requested index
};

/// Implicit-shift QL on the tridiagonal matrix, accumulating only the
/// requested rows of Q: O(n^2 * rows.size()) work and O(n * rows.size())
/// memory. `row_indices` are vector indices (0-based). Throws NumericalError
/// when an eigenvalue needs more than 60 iterations.
PartialEigenSystem partial_eigensystem(std::span<const double> diag, std::span<const double> offdiag,
                                       std::span<const std::size_t> row_indices);
PartialEigenSystem partial_eigensystem(const TridiagonalOperator& op, std::span<const std::size_t> row_indices);

/// Same QL sweep, but accumulates Q^T v for an arbitrary (complex) vector v
/// instead of fixed rows: returns eigenvalues and the expansion coefficients.
struct SpectralCoefficients {
  Eigen::VectorXd eigenvalues;
  Eigen::VectorXcd coefficients;  // coefficients(j) = <v, q_j>
};
SpectralCoefficients spectral_coefficients(const TridiagonalOperator& op, const Eigen::VectorXcd& v);

/// mu_psi = sum_j |<q_j, psi>|^2 delta_{E_j}.
AtomicMeasure spectral_measure(const EigenSystem& sys, const Eigen::VectorXcd& psi,
                               double coalesce_tolerance = kDefaultCoalesceTolerance);

/// Spectral measure of delta_site, via partial_eigensystem.
AtomicMeasure site_spectral_measure(const TridiagonalOperator& op, long site,
                                    double coalesce_tolerance = kDefaultCoalesceTolerance);

/// Coalescing tolerance used for measures of the model with coupling V.
inline double model_coalesce_tolerance(double coupling) { return 1e-12 * (4.0 + 2.0 * coupling); }

struct DensityOfStatesOptions {
  unsigned threads = 1;
};

struct DensityOfStates {
  AtomicMeasure measure;
  std::size_t breakpoint_count = 0;
  /// Number of eigenproblems actually solved (intervals with equal or mirrored
  /// potential patterns share one solve).
  std::size_t distinct_problems = 0;
};

/// mu = integral over the phase circle of the spectral measure of delta_0,
/// evaluated exactly as sum over phase_partition intervals of
/// length * mu_{representative}. The phase field of `params` is ignored.
DensityOfStates density_of_states(const ModelParams& params, const DensityOfStatesOptions& options = {});

/// Riemann average of the site-0 spectral measure over M uniform phases k/M.
AtomicMeasure riemann_density_of_states(const ModelParams& params, std::size_t phase_count,
                                        const DensityOfStatesOptions& options = {});

std::vector<double> default_tensor_check_grid();

/// Spectral measure of psi_1 (x) ... (x) psi_N under the Kronecker sum,
/// computed (a) directly from the product operator and (b) as the convolution
/// of the factor measures. Returns max |fourier(a) - fourier(b)| on `xi_grid`
/// (default: 200 points evenly spaced on [0, 20]).
double tensor_spectral_check(std::span<const Eigen::MatrixXd> factors, std::span<const Eigen::VectorXcd> states,
                             std::span<const double> xi_grid = {},
                             std::size_t dimension_cap = kDefaultTensorDimensionCap);

}  // namespace quasispec
