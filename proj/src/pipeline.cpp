#include "quasispec/pipeline.hpp"

#include <string>

#include "quasispec/error.hpp"
#include "quasispec/spectral.hpp"

namespace quasispec {

TraceMethod parse_trace_method(std::string_view name) {
  if (name == "exact") return TraceMethod::exact;
  if (name == "moments") return TraceMethod::moments;
  if (name == "auto") return TraceMethod::automatic;
  throw ConfigError("unknown method '" + std::string(name) + "' (expected exact, moments or auto)");
}

std::string_view to_string(TraceMethod method) {
  switch (method) {
    case TraceMethod::exact: return "exact";
    case TraceMethod::moments: return "moments";
    default: return "auto";
  }
}

TraceMethod resolve_method(TraceMethod method, const ModelParams& params) {
  if (method != TraceMethod::automatic) return method;
  return params.coupling == 0.0 || params.half_width <= kAutoExactMaxHalfWidth ? TraceMethod::exact
                                                                                 : TraceMethod::moments;
}

FourierTrace dos_fourier_trace(const ModelParams& params, std::span<const double> xi_grid, TraceMethod method,
                               unsigned threads) {
  params.validate();
  if (resolve_method(method, params) == TraceMethod::exact) {
    DensityOfStatesOptions dos_opts;
    dos_opts.threads = threads;
    FourierOptions f_opts;
    f_opts.threads = threads;
    return fourier(density_of_states(params, dos_opts).measure, xi_grid, f_opts);
  }
  for (std::size_t i = 1; i < xi_grid.size(); ++i)
    if (!(xi_grid[i] > xi_grid[i - 1])) throw ConfigError("frequency grid must be strictly increasing");
  AverageOptions opts;
  opts.threads = threads;
  // The transform of the finite-volume DOS is well defined at every xi.
  opts.enforce_light_cone = false;
  const SparseState origin{{0, 1.0}};
  auto series = phase_averaged_amplitude(origin, origin, xi_grid, params, opts);
  return {std::move(series.t), std::move(series.values)};
}

DecayResult decay_pipeline(const ModelParams& params, std::span<const double> xi_grid, TraceMethod method,
                           int blocks_per_decade, unsigned threads, double window_min, double window_max) {
  DecayResult result;
  result.method = resolve_method(method, params);
  if (xi_grid.size() < 2) throw ConfigError("grid too short: need at least two frequencies");
  result.trace = dos_fourier_trace(params, xi_grid, result.method, threads);
  result.blocks = envelope(result.trace, blocks_per_decade);
  result.fit = fit_decay(result.blocks, window_min, window_max);
  return result;
}

L2Evidence l2_evidence(const FourierTrace& trace, double epsilon, std::span<const double> cutoffs) {
  if (cutoffs.size() < 2) throw ConfigError("L2 evidence needs at least two cutoffs");
  L2Evidence out;
  out.power = min_power_for_l2(epsilon);
  out.cutoffs.assign(cutoffs.begin(), cutoffs.end());
  out.integrals = l2_growth_diagnostic(trace, out.power, cutoffs);
  out.final_ratio = out.integrals.back() / out.integrals[out.integrals.size() - 2];
  return out;
}

EscapeOfMass escape_of_mass(const AmplitudeSeries& series, int j_min, int j_max) {
  EscapeOfMass out;
  out.blocks = dyadic_block_maxima(series.t, series.values, j_min, j_max);
  out.strictly_decreasing = true;
  for (std::size_t i = 1; i < out.blocks.size(); ++i)
    if (!(out.blocks[i].value < out.blocks[i - 1].value)) out.strictly_decreasing = false;
  out.last_over_first = out.blocks.back().value / out.blocks.front().value;
  return out;
}

}  // namespace quasispec
