#include "quasispec/operator.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <numeric>
#include <string>

#include "quasispec/error.hpp"

namespace quasispec {

void ModelParams::validate() const {
  if (!(alpha > 0.0 && alpha < 1.0)) throw ConfigError("alpha must lie in (0, 1), got " + std::to_string(alpha));
  if (half_width < 0) throw ConfigError("half width must be nonnegative");
  if (!(coupling >= 0.0) || !std::isfinite(coupling)) throw ConfigError("coupling must be a finite nonnegative number");
  if (!(phase >= 0.0 && phase < 1.0)) throw ConfigError("phase must lie in [0, 1), got " + std::to_string(phase));
}

double frac(double x) {
  const double r = x - std::floor(x);
  // x slightly below an integer can round up to exactly 1.
  return r < 1.0 ? r : std::nextafter(1.0, 0.0);
}

double potential_value(double phase, long site, const ModelParams& params) {
  const double x = frac(phase + static_cast<double>(site) * params.alpha);
  return x >= 1.0 - params.alpha ? params.coupling : 0.0;
}

TridiagonalOperator::TridiagonalOperator(std::vector<double> diag, int half_width, double coupling)
    : diag_(std::move(diag)), half_width_(half_width), coupling_(coupling) {
  if (diag_.size() != 2 * static_cast<std::size_t>(half_width) + 1)
    throw ConfigError("diagonal length must equal 2L+1");
}

std::size_t TridiagonalOperator::index_of(long site) const {
  if (std::labs(site) > half_width_)
    throw ConfigError("site " + std::to_string(site) + " outside [-L, L] with L = " + std::to_string(half_width_));
  return static_cast<std::size_t>(site + half_width_);
}

double TridiagonalOperator::norm_bound() const {
  double vmax = 0.0;
  for (double d : diag_) vmax = std::max(vmax, std::abs(d));
  return 2.0 + vmax;
}

Eigen::MatrixXd TridiagonalOperator::to_dense() const {
  const auto n = static_cast<Eigen::Index>(diag_.size());
  Eigen::MatrixXd m = Eigen::MatrixXd::Zero(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    m(i, i) = diag_[static_cast<std::size_t>(i)];
    if (i + 1 < n) m(i, i + 1) = m(i + 1, i) = 1.0;
  }
  return m;
}

void TridiagonalOperator::apply(std::span<const double> x, std::span<double> y) const {
  const std::size_t n = diag_.size();
  if (x.size() != n || y.size() != n) throw ConfigError("dimension mismatch in TridiagonalOperator::apply");
  if (n == 1) {
    y[0] = diag_[0] * x[0];
    return;
  }
  y[0] = diag_[0] * x[0] + x[1];
  for (std::size_t i = 1; i + 1 < n; ++i) y[i] = x[i - 1] + diag_[i] * x[i] + x[i + 1];
  y[n - 1] = x[n - 2] + diag_[n - 1] * x[n - 1];
}

std::vector<std::uint8_t> potential_pattern(double phase, const ModelParams& params) {
  std::vector<std::uint8_t> pattern(params.dimension());
  for (std::size_t k = 0; k < pattern.size(); ++k) {
    const long site = static_cast<long>(k) - params.half_width;
    const double x = frac(phase + static_cast<double>(site) * params.alpha);
    pattern[k] = x >= 1.0 - params.alpha ? 1 : 0;
  }
  return pattern;
}

TridiagonalOperator hamiltonian_from_pattern(std::span<const std::uint8_t> pattern, int half_width, double coupling) {
  std::vector<double> diag(pattern.size());
  std::transform(pattern.begin(), pattern.end(), diag.begin(),
                 [coupling](std::uint8_t on) { return on ? coupling : 0.0; });
  return TridiagonalOperator(std::move(diag), half_width, coupling);
}

TridiagonalOperator build_hamiltonian(const ModelParams& params) {
  params.validate();
  return hamiltonian_from_pattern(potential_pattern(params.phase, params), params.half_width, params.coupling);
}

double shift_hamiltonian_check(const ModelParams& params, long shift) {
  params.validate();
  const long L = params.half_width;
  if (std::labs(shift) > L) throw ConfigError("shift must satisfy |k| <= L");
  ModelParams shifted = params;
  shifted.phase = frac(params.phase + static_cast<double>(shift) * params.alpha);
  double worst = 0.0;
  for (long n = -L; n <= L; ++n) {
    if (std::labs(n + shift) > L) continue;
    const double lhs = potential_value(shifted.phase, n, shifted);
    const double rhs = potential_value(params.phase, n + shift, params);
    worst = std::max(worst, std::abs(lhs - rhs));
  }
  return worst;
}

double PhasePartition::total_length() const {
  double total = 0.0;
  for (const auto& iv : intervals) total += iv.length;
  return total;
}

PhasePartition phase_partition(const ModelParams& params) {
  ModelParams p = params;
  p.phase = 0.0;
  p.validate();
  const long L = p.half_width;

  // The indicator at site n switches where phase + n*alpha crosses 1 - alpha or 0.
  std::vector<double> points;
  points.reserve(2 * static_cast<std::size_t>(2 * L + 1));
  for (long n = -L; n <= L; ++n) {
    const double na = static_cast<double>(n) * p.alpha;
    points.push_back(frac(1.0 - p.alpha - na));
    points.push_back(frac(-na));
  }
  std::sort(points.begin(), points.end());

  PhasePartition partition;
  for (double x : points) {
    if (partition.breakpoints.empty() || x - partition.breakpoints.back() > kBreakpointDedupTolerance)
      partition.breakpoints.push_back(x);
  }
  // Points within the tolerance of 1 are the same as 0 on the circle.
  while (partition.breakpoints.size() > 1 && 1.0 - partition.breakpoints.back() <= kBreakpointDedupTolerance)
    partition.breakpoints.pop_back();

  const auto& bp = partition.breakpoints;
  const std::size_t count = bp.size();
  partition.intervals.reserve(count);
  for (std::size_t i = 0; i < count; ++i) {
    PhaseInterval iv;
    iv.left = bp[i];
    if (i + 1 < count) {
      iv.length = bp[i + 1] - bp[i];
      iv.representative = bp[i] + 0.5 * iv.length;
    } else {
      // Last interval wraps through 1 == 0 back to the first breakpoint.
      iv.length = 1.0 - bp[i] + bp[0];
      iv.representative = frac(bp[i] + 0.5 * iv.length);
    }
    iv.pattern = potential_pattern(iv.representative, p);
    partition.intervals.push_back(std::move(iv));
  }
  return partition;
}

Eigen::MatrixXd tensor_sum(std::span<const Eigen::MatrixXd> factors, std::size_t dimension_cap) {
  if (factors.empty()) throw ConfigError("tensor_sum needs at least one factor");
  std::size_t total = 1;
  for (const auto& f : factors) {
    if (f.rows() != f.cols() || f.rows() == 0) throw ConfigError("tensor_sum factors must be nonempty square matrices");
    total *= static_cast<std::size_t>(f.rows());
    if (total > dimension_cap)
      throw CapExceeded("tensor product dimension exceeds cap of " + std::to_string(dimension_cap));
  }
  const auto dim = static_cast<Eigen::Index>(total);
  Eigen::MatrixXd result = Eigen::MatrixXd::Zero(dim, dim);
  Eigen::Index before = 1;
  for (const auto& f : factors) {
    const Eigen::Index d = f.rows();
    const Eigen::Index after = dim / (before * d);
    // I_before (x) F (x) I_after
    for (Eigen::Index b = 0; b < before; ++b)
      for (Eigen::Index i = 0; i < d; ++i)
        for (Eigen::Index j = 0; j < d; ++j) {
          const double v = f(i, j);
          if (v == 0.0) continue;
          const Eigen::Index row0 = (b * d + i) * after;
          const Eigen::Index col0 = (b * d + j) * after;
          for (Eigen::Index a = 0; a < after; ++a) result(row0 + a, col0 + a) += v;
        }
    before *= d;
  }
  return result;
}

Eigen::VectorXcd tensor_product(std::span<const Eigen::VectorXcd> factors, std::size_t dimension_cap) {
  if (factors.empty()) throw ConfigError("tensor_product needs at least one factor");
  Eigen::VectorXcd result = Eigen::VectorXcd::Ones(1);
  for (const auto& f : factors) {
    if (static_cast<std::size_t>(result.size() * f.size()) > dimension_cap)
      throw CapExceeded("tensor product dimension exceeds cap of " + std::to_string(dimension_cap));
    Eigen::VectorXcd next(result.size() * f.size());
    for (Eigen::Index i = 0; i < result.size(); ++i) next.segment(i * f.size(), f.size()) = result(i) * f;
    result = std::move(next);
  }
  return result;
}

}  // namespace quasispec
