#pragma once

#include <limits>
#include <span>
#include <string_view>
#include <vector>

#include "quasispec/analysis.hpp"
#include "quasispec/dynamics.hpp"
#include "quasispec/measures.hpp"
#include "quasispec/operator.hpp"

namespace quasispec {

/// How the Fourier transform of the density of states is evaluated.
///  exact:     density_of_states followed by fourier (all atoms kept).
///  moments:   phase-averaged Chebyshev moments of delta_0, resummed on the grid.
///             Same finite-volume quantity, without materializing the atoms.
///  automatic: exact when V = 0 or L <= kAutoExactMaxHalfWidth, else moments.
enum class TraceMethod { exact, moments, automatic };

inline constexpr int kAutoExactMaxHalfWidth = 200;

TraceMethod parse_trace_method(std::string_view name);
std::string_view to_string(TraceMethod method);
TraceMethod resolve_method(TraceMethod method, const ModelParams& params);

/// mu^(xi) of the finite-volume DOS on `xi_grid`.
FourierTrace dos_fourier_trace(const ModelParams& params, std::span<const double> xi_grid, TraceMethod method,
                               unsigned threads = 1);

struct DecayResult {
  TraceMethod method = TraceMethod::exact;  // the resolved method
  FourierTrace trace;
  std::vector<BlockMaximum> blocks;
  DecayFit fit;
};

/// DOS -> fourier -> envelope -> fit over [window_min, window_max].
DecayResult decay_pipeline(const ModelParams& params, std::span<const double> xi_grid, TraceMethod method,
                           int blocks_per_decade = kDefaultBlocksPerDecade, unsigned threads = 1,
                           double window_min = kDefaultFitStart,
                           double window_max = std::numeric_limits<double>::infinity());

struct L2Evidence {
  int power = 0;
  std::vector<double> cutoffs;
  std::vector<double> integrals;
  double final_ratio = 0.0;  // integrals[last] / integrals[last - 1]
};

/// N = min_power_for_l2(epsilon) and the partial L2 integrals of |mu^|^N.
L2Evidence l2_evidence(const FourierTrace& trace, double epsilon, std::span<const double> cutoffs);

struct EscapeOfMass {
  std::vector<BlockMaximum> blocks;
  bool strictly_decreasing = false;
  double last_over_first = 0.0;
};

/// Dyadic block maxima of |A(t)| over [2^j, 2^(j+1)), j = j_min..j_max.
EscapeOfMass escape_of_mass(const AmplitudeSeries& series, int j_min = 2, int j_max = 9);

}  // namespace quasispec
