// Implicit-shift QL iteration for symmetric tridiagonal matrices that tracks
// only a few linear functionals of the eigenvector matrix instead of all of it.
//
// Every QL step multiplies Z (initially the identity) from the right by a
// plane rotation acting on columns i and i+1. Any fixed row combination
// w^T Z transforms the same way, so carrying the requested rows (or w^T = v^T
// for expansion coefficients) costs O(rows) per rotation.

#include <algorithm>
#include <cmath>
#include <complex>
#include <limits>
#include <numeric>
#include <vector>

#include "quasispec/error.hpp"
#include "quasispec/spectral.hpp"

namespace quasispec {
namespace {

constexpr int kMaxIterationsPerEigenvalue = 60;

/// Tracked functionals, stored column-major: entry (r, col) at col * width + r.
template <class Scalar>
struct Tracked {
  std::size_t width = 0;
  std::vector<Scalar> data;

  void rotate(std::size_t i, double s, double c) {
    Scalar* zi = data.data() + i * width;
    Scalar* zj = zi + width;
    for (std::size_t r = 0; r < width; ++r) {
      const Scalar f = zj[r];
      zj[r] = s * zi[r] + c * f;
      zi[r] = c * zi[r] - s * f;
    }
  }
};

template <>
void Tracked<double>::rotate(std::size_t i, double s, double c) {
  double* zi = data.data() + i * width;
  double* zj = zi + width;
  if (width == 1) {
    const double f = *zj;
    *zj = s * *zi + c * f;
    *zi = c * *zi - s * f;
    return;
  }
  for (std::size_t r = 0; r < width; ++r) {
    const double f = zj[r];
    zj[r] = s * zi[r] + c * f;
    zi[r] = c * zi[r] - s * f;
  }
}

/// On return d holds the (unsorted) eigenvalues and z the rotated functionals.
template <class Scalar>
void implicit_ql(std::vector<double>& d, std::vector<double> e, Tracked<Scalar>& z) {
  const std::size_t n = d.size();
  if (n <= 1) return;
  e.resize(n, 0.0);
  e[n - 1] = 0.0;
  constexpr double eps = std::numeric_limits<double>::epsilon();

  for (std::size_t l = 0; l < n; ++l) {
    int iter = 0;
    std::size_t m;
    for (;;) {
      for (m = l; m + 1 < n; ++m) {
        const double dd = std::abs(d[m]) + std::abs(d[m + 1]);
        if (std::abs(e[m]) <= eps * dd) break;
      }
      if (m == l) break;
      if (++iter > kMaxIterationsPerEigenvalue)
        throw NumericalError("tridiagonal QL iteration did not converge");

      // Wilkinson-type shift from the leading 2x2 block.
      double g = (d[l + 1] - d[l]) / (2.0 * e[l]);
      double r = std::hypot(g, 1.0);
      g = d[m] - d[l] + e[l] / (g + std::copysign(r, g));
      double s = 1.0;
      double c = 1.0;
      double p = 0.0;
      bool underflow = false;
      for (std::size_t i = m; i-- > l;) {
        const double f = s * e[i];
        const double b = c * e[i];
        r = std::sqrt(f * f + g * g);
        e[i + 1] = r;
        if (r == 0.0) {
          d[i + 1] -= p;
          e[m] = 0.0;
          underflow = true;
          break;
        }
        const double inv = 1.0 / r;
        s = f * inv;
        c = g * inv;
        g = d[i + 1] - p;
        r = (d[i] - g) * s + 2.0 * c * b;
        p = s * r;
        d[i + 1] = g + p;
        g = c * r - b;
        z.rotate(i, s, c);
      }
      if (underflow) continue;
      d[l] -= p;
      e[l] = g;
      e[m] = 0.0;
    }
  }
}

std::vector<std::size_t> ascending_order(const std::vector<double>& values) {
  std::vector<std::size_t> order(values.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return values[a] < values[b]; });
  return order;
}

std::vector<double> unit_offdiag(std::size_t n) { return std::vector<double>(n > 0 ? n - 1 : 0, 1.0); }

}  // namespace

PartialEigenSystem partial_eigensystem(std::span<const double> diag, std::span<const double> offdiag,
                                       std::span<const std::size_t> row_indices) {
  const std::size_t n = diag.size();
  if (n == 0) throw ConfigError("empty tridiagonal matrix");
  if (offdiag.size() + 1 != n) throw ConfigError("off-diagonal length must be n - 1");
  for (auto r : row_indices)
    if (r >= n) throw ConfigError("requested eigenvector row out of range");

  std::vector<double> d(diag.begin(), diag.end());
  Tracked<double> z;
  z.width = row_indices.size();
  z.data.assign(n * z.width, 0.0);
  for (std::size_t r = 0; r < z.width; ++r) z.data[row_indices[r] * z.width + r] = 1.0;

  implicit_ql(d, std::vector<double>(offdiag.begin(), offdiag.end()), z);

  const auto order = ascending_order(d);
  PartialEigenSystem out;
  out.eigenvalues.resize(static_cast<Eigen::Index>(n));
  out.rows.resize(static_cast<Eigen::Index>(z.width), static_cast<Eigen::Index>(n));
  for (std::size_t j = 0; j < n; ++j) {
    out.eigenvalues(static_cast<Eigen::Index>(j)) = d[order[j]];
    for (std::size_t r = 0; r < z.width; ++r)
      out.rows(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(j)) = z.data[order[j] * z.width + r];
  }
  return out;
}

PartialEigenSystem partial_eigensystem(const TridiagonalOperator& op, std::span<const std::size_t> row_indices) {
  const auto off = unit_offdiag(op.dimension());
  return partial_eigensystem(op.diag(), off, row_indices);
}

SpectralCoefficients spectral_coefficients(const TridiagonalOperator& op, const Eigen::VectorXcd& v) {
  const std::size_t n = op.dimension();
  if (static_cast<std::size_t>(v.size()) != n) throw ConfigError("state dimension does not match operator");
  std::vector<double> d = op.diag();
  Tracked<std::complex<double>> z;
  z.width = 1;
  z.data.assign(v.data(), v.data() + n);
  implicit_ql(d, unit_offdiag(n), z);

  const auto order = ascending_order(d);
  SpectralCoefficients out;
  out.eigenvalues.resize(static_cast<Eigen::Index>(n));
  out.coefficients.resize(static_cast<Eigen::Index>(n));
  for (std::size_t j = 0; j < n; ++j) {
    out.eigenvalues(static_cast<Eigen::Index>(j)) = d[order[j]];
    out.coefficients(static_cast<Eigen::Index>(j)) = z.data[order[j]];
  }
  return out;
}

}  // namespace quasispec
