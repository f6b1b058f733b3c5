#include "quasispec/measures.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "quasispec/error.hpp"
#include "quasispec/parallel.hpp"

namespace quasispec {

FourierTrace fourier(const AtomicMeasure& m, std::span<const double> xi_grid, const FourierOptions& options) {
  for (std::size_t i = 1; i < xi_grid.size(); ++i)
    if (!(xi_grid[i] > xi_grid[i - 1])) throw ConfigError("frequency grid must be strictly increasing");

  FourierTrace trace;
  trace.xi.assign(xi_grid.begin(), xi_grid.end());
  trace.values.resize(xi_grid.size());
  const auto atoms = m.atoms();
  constexpr std::size_t kChunk = 64;
  const std::size_t chunks = (xi_grid.size() + kChunk - 1) / kChunk;
  parallel_for(chunks, options.threads, [&](std::size_t c) {
    const std::size_t end = std::min(xi_grid.size(), (c + 1) * kChunk);
    for (std::size_t i = c * kChunk; i < end; ++i) {
      const double xi = xi_grid[i];
      double re = 0.0;
      double im = 0.0;
      for (const auto& a : atoms) {
        const double phase = xi * a.position;
        re += a.weight * std::cos(phase);
        im += a.weight * std::sin(phase);
      }
      trace.values[i] = {re, im};
    }
  });
  return trace;
}

namespace {

double combined_dropped(const AtomicMeasure& a, const AtomicMeasure& b) {
  const double da = a.dropped_mass();
  const double db = b.dropped_mass();
  return da * b.total_mass() + a.total_mass() * db + da * db;
}

}  // namespace

AtomicMeasure convolve_exact(const AtomicMeasure& a, const AtomicMeasure& b, const ConvolutionOptions& options) {
  const std::size_t pairs = a.size() * b.size();
  if (a.size() != 0 && pairs / a.size() != b.size()) throw CapExceeded("convolution pair count overflows");
  if (pairs > options.pair_cap)
    throw CapExceeded("exact convolution needs " + std::to_string(pairs) + " pairs, cap is " +
                      std::to_string(options.pair_cap) + "; use binned convolution");
  std::vector<Atom> atoms;
  atoms.reserve(pairs);
  for (const auto& x : a.atoms())
    for (const auto& y : b.atoms()) atoms.push_back({x.position + y.position, x.weight * y.weight});
  AtomicMeasure result(std::move(atoms), options.coalesce_tolerance);
  result.add_dropped_mass(combined_dropped(a, b));
  result.prune(options.prune_relative);
  return result;
}

namespace {

struct Binned {
  long first = 0;               // lattice index of weights[0]
  std::vector<double> weights;  // dense over [first, first + size)
};

constexpr std::size_t kMaxLatticeLength = 100'000'000;

Binned bin(const AtomicMeasure& m, double h) {
  Binned out;
  if (m.empty()) return out;
  const auto atoms = m.atoms();
  const double lo = std::round(atoms.front().position / h);
  const double hi = std::round(atoms.back().position / h);
  if (hi - lo + 1.0 > static_cast<double>(kMaxLatticeLength))
    throw CapExceeded("binned measure spans too many lattice points; increase the bin width");
  out.first = static_cast<long>(lo);
  out.weights.assign(static_cast<std::size_t>(hi - lo) + 1, 0.0);
  for (const auto& a : atoms) {
    const auto idx = static_cast<long>(std::round(a.position / h)) - out.first;
    out.weights[static_cast<std::size_t>(idx)] += a.weight;
  }
  return out;
}

AtomicMeasure from_lattice(const Binned& b, double h, double dropped) {
  std::vector<Atom> atoms;
  for (std::size_t i = 0; i < b.weights.size(); ++i)
    if (b.weights[i] > 0.0) atoms.push_back({static_cast<double>(b.first + static_cast<long>(i)) * h, b.weights[i]});
  // Lattice points are h apart, so no coalescing happens.
  AtomicMeasure m(std::move(atoms), 0.0);
  m.add_dropped_mass(dropped);
  return m;
}

}  // namespace

AtomicMeasure bin_to_lattice(const AtomicMeasure& m, double bin_width) {
  if (!(bin_width > 0.0)) throw ConfigError("bin width must be positive");
  return from_lattice(bin(m, bin_width), bin_width, m.dropped_mass());
}

AtomicMeasure convolve_binned(const AtomicMeasure& a, const AtomicMeasure& b, double bin_width,
                              const ConvolutionOptions& options) {
  if (!(bin_width > 0.0)) throw ConfigError("bin width must be positive");
  if (a.empty() || b.empty()) {
    AtomicMeasure empty;
    empty.add_dropped_mass(combined_dropped(a, b));
    return empty;
  }
  const Binned x = bin(a, bin_width);
  const Binned y = bin(b, bin_width);
  if (x.weights.size() + y.weights.size() - 1 > kMaxLatticeLength)
    throw CapExceeded("binned convolution spans too many lattice points; increase the bin width");
  Binned z;
  z.first = x.first + y.first;
  z.weights.assign(x.weights.size() + y.weights.size() - 1, 0.0);
  for (std::size_t i = 0; i < x.weights.size(); ++i) {
    const double wi = x.weights[i];
    if (wi == 0.0) continue;
    double* out = z.weights.data() + i;
    for (std::size_t j = 0; j < y.weights.size(); ++j) out[j] += wi * y.weights[j];
  }
  AtomicMeasure result = from_lattice(z, bin_width, combined_dropped(a, b));
  result.prune(options.prune_relative);
  return result;
}

AtomicMeasure convolution_power(const AtomicMeasure& m, int power, ConvolutionMode mode, double bin_width,
                                const ConvolutionOptions& options) {
  if (power < 1) throw ConfigError("convolution power must be at least 1");
  auto convolve = [&](const AtomicMeasure& x, const AtomicMeasure& y) {
    return mode == ConvolutionMode::exact ? convolve_exact(x, y, options) : convolve_binned(x, y, bin_width, options);
  };
  AtomicMeasure base = mode == ConvolutionMode::exact ? m : bin_to_lattice(m, bin_width);
  if (power == 1) return base;
  AtomicMeasure result;
  bool have_result = false;
  for (int p = power;;) {
    if (p & 1) {
      result = have_result ? convolve(result, base) : base;
      have_result = true;
    }
    p >>= 1;
    if (p == 0) break;
    base = convolve(base, base);
  }
  return result;
}

}  // namespace quasispec
