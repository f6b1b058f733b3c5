#pragma once

#include <complex>
#include <cstddef>
#include <span>
#include <vector>

#include "quasispec/atomic_measure.hpp"

namespace quasispec {

/// Samples of mu^(xi) = sum_j w_j exp(i xi E_j) on a strictly increasing grid.
/// The sign convention makes mu_psi^(t) = <exp(itH) psi, psi>.
struct FourierTrace {
  std::vector<double> xi;
  std::vector<std::complex<double>> values;
};

struct FourierOptions {
  unsigned threads = 1;
};

/// Direct summation in ascending atom order (deterministic for any thread count).
FourierTrace fourier(const AtomicMeasure& m, std::span<const double> xi_grid, const FourierOptions& options = {});

struct ConvolutionOptions {
  double coalesce_tolerance = kDefaultCoalesceTolerance;
  /// Maximum number of pairwise products in convolve_exact.
  std::size_t pair_cap = 10'000'000;
  /// Atoms lighter than this fraction of the total mass are dropped (and
  /// recorded in dropped_mass()).
  double prune_relative = 1e-15;
};

/// a * b by enumerating all pairwise sums. Throws CapExceeded when
/// |a| * |b| > pair_cap.
AtomicMeasure convolve_exact(const AtomicMeasure& a, const AtomicMeasure& b, const ConvolutionOptions& options = {});

/// Default lattice spacing for binned convolution at coupling V.
inline double default_bin_width(double coupling) { return 1e-4 * (4.0 + 2.0 * coupling); }

/// Moves each atom to the nearest point of h*Z (mass preserving).
AtomicMeasure bin_to_lattice(const AtomicMeasure& m, double bin_width);

/// Bins both inputs to h*Z and convolves on the lattice. Each output atom is
/// within h of a true pairwise sum.
AtomicMeasure convolve_binned(const AtomicMeasure& a, const AtomicMeasure& b, double bin_width,
                              const ConvolutionOptions& options = {});

enum class ConvolutionMode { exact, binned };

/// N-fold self-convolution by repeated squaring.
AtomicMeasure convolution_power(const AtomicMeasure& m, int power, ConvolutionMode mode, double bin_width = 0.0,
                                const ConvolutionOptions& options = {});

}  // namespace quasispec
