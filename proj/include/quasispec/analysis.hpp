#pragma once

#include <complex>
#include <cstddef>
#include <limits>
#include <span>
#include <vector>

#include "quasispec/measures.hpp"

namespace quasispec {

struct BlockMaximum {
  double center = 0.0;  // geometric center of the block
  double left = 0.0;
  double right = 0.0;
  double value = 0.0;   // max |f| over samples in [left, right)
};

/// Power-law fit |mu^(xi)| ~ C xi^(-epsilon) of block maxima.
struct DecayFit {
  double epsilon = 0.0;
  double intercept = 0.0;  // log C
  double window_min = 0.0;
  double window_max = 0.0;
  double stderr_epsilon = 0.0;
  std::vector<BlockMaximum> block_maxima;  // the blocks used in the fit
};

inline constexpr int kDefaultBlocksPerDecade = 8;
inline constexpr double kDefaultFitStart = 10.0;

/// Splits the positive part of the grid into log-uniform blocks, aligned to
/// powers of ten with `blocks_per_decade` blocks per decade, and returns the
/// maximum modulus per nonempty block. Throws ConfigError when the positive
/// grid spans less than one decade.
std::vector<BlockMaximum> envelope(std::span<const double> grid, std::span<const std::complex<double>> values,
                                   int blocks_per_decade = kDefaultBlocksPerDecade);
std::vector<BlockMaximum> envelope(const FourierTrace& trace, int blocks_per_decade = kDefaultBlocksPerDecade);

/// Ordinary least squares of log(value) on log(center) over the blocks whose
/// left edge is >= window_min and right edge <= window_max.
/// Throws ConfigError with fewer than 4 blocks or a degenerate window.
DecayFit fit_decay(std::span<const BlockMaximum> blocks, double window_min = kDefaultFitStart,
                   double window_max = std::numeric_limits<double>::infinity());

/// Smallest N with N * epsilon > 1/2.
int min_power_for_l2(double epsilon);

/// Trapezoidal integrals of |mu^|^(2N) over [-Xi, Xi] (using |mu^(-xi)| = |mu^(xi)|)
/// for each cutoff Xi. The trace must start at xi = 0 and reach the largest cutoff.
std::vector<double> l2_growth_diagnostic(const FourierTrace& trace, int power, std::span<const double> cutoffs);

/// Maxima of |values| over the dyadic windows [2^j, 2^(j+1)), j = j_min..j_max.
std::vector<BlockMaximum> dyadic_block_maxima(std::span<const double> grid,
                                              std::span<const std::complex<double>> values, int j_min, int j_max);

}  // namespace quasispec
