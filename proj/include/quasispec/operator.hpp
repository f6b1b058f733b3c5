#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include <Eigen/Dense>

namespace quasispec {

/// (sqrt(5) - 1) / 2, the inverse of the golden ratio.
inline constexpr double kInverseGoldenRatio = 0.61803398874989484820;

/// Parameters of one truncated Fibonacci Hamiltonian H_omega on sites [-L, L].
struct ModelParams {
  double coupling = 0.5;
  double alpha = kInverseGoldenRatio;
  int half_width = 0;
  double phase = 0.0;

  /// Throws ConfigError unless 0 < alpha < 1, L >= 0, V >= 0 and phase in [0, 1).
  void validate() const;
  [[nodiscard]] std::size_t dimension() const { return 2 * static_cast<std::size_t>(half_width) + 1; }
};

/// x - floor(x), clamped into [0, 1).
double frac(double x);

/// V * 1_{[1-alpha, 1)}(frac(phase + n * alpha)).
double potential_value(double phase, long site, const ModelParams& params);

/// Truncation of H_omega to [-L, L] with Dirichlet boundary: unit hopping,
/// diagonal potential. Index k of `diag` is lattice site k - L.
class TridiagonalOperator {
 public:
  TridiagonalOperator() = default;
  TridiagonalOperator(std::vector<double> diag, int half_width, double coupling);

  [[nodiscard]] std::size_t dimension() const { return diag_.size(); }
  [[nodiscard]] int half_width() const { return half_width_; }
  [[nodiscard]] double coupling() const { return coupling_; }
  [[nodiscard]] const std::vector<double>& diag() const { return diag_; }
  /// Vector index of lattice site n.
  [[nodiscard]] std::size_t index_of(long site) const;
  /// Upper bound on the operator norm: 2 + max |diag|.
  [[nodiscard]] double norm_bound() const;

  [[nodiscard]] Eigen::MatrixXd to_dense() const;
  /// y = H x
  void apply(std::span<const double> x, std::span<double> y) const;

 private:
  std::vector<double> diag_;
  int half_width_ = 0;
  double coupling_ = 0.0;
};

TridiagonalOperator build_hamiltonian(const ModelParams& params);

/// Builds the operator for a given on/off potential pattern (1 = potential V).
TridiagonalOperator hamiltonian_from_pattern(std::span<const std::uint8_t> pattern, int half_width, double coupling);

/// Maximum |diag H_{omega + k alpha}(n) - diag H_omega(n + k)| over all n with
/// |n|, |n + k| <= L. Shift covariance predicts exactly zero.
double shift_hamiltonian_check(const ModelParams& params, long shift);

struct PhaseInterval {
  double left = 0.0;
  double length = 0.0;
  double representative = 0.0;
  /// pattern[k] == 1 iff site k - L carries the potential for phases inside the interval.
  std::vector<std::uint8_t> pattern;
};

/// Exact partition of the phase circle into intervals on which the truncated
/// diagonal is constant.
struct PhasePartition {
  std::vector<double> breakpoints;
  std::vector<PhaseInterval> intervals;

  [[nodiscard]] double total_length() const;
};

inline constexpr double kBreakpointDedupTolerance = 1e-12;

PhasePartition phase_partition(const ModelParams& params);

/// Potential pattern of H_omega on [-L, L] (1 where the indicator fires).
std::vector<std::uint8_t> potential_pattern(double phase, const ModelParams& params);

inline constexpr std::size_t kDefaultTensorDimensionCap = 4096;

/// Kronecker sum  sum_k I x ... x H_k x ... x I  (first factor is the slowest index).
/// Throws CapExceeded when the product dimension exceeds `dimension_cap`.
Eigen::MatrixXd tensor_sum(std::span<const Eigen::MatrixXd> factors,
                           std::size_t dimension_cap = kDefaultTensorDimensionCap);

/// Kronecker product of state vectors, same index ordering as tensor_sum.
Eigen::VectorXcd tensor_product(std::span<const Eigen::VectorXcd> factors,
                                std::size_t dimension_cap = kDefaultTensorDimensionCap);

}  // namespace quasispec
