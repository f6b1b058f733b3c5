#include "quasispec/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "quasispec/error.hpp"

namespace quasispec {

namespace {
constexpr double kEdgeSlack = 1e-12;
}

std::vector<BlockMaximum> envelope(std::span<const double> grid, std::span<const std::complex<double>> values,
                                   int blocks_per_decade) {
  if (grid.size() != values.size()) throw ConfigError("grid and values differ in length");
  if (blocks_per_decade < 1) throw ConfigError("blocks per decade must be at least 1");
  const auto first = std::find_if(grid.begin(), grid.end(), [](double x) { return x > 0.0; });
  if (first == grid.end() || grid.back() < 10.0 * (*first) * (1.0 - kEdgeSlack))
    throw ConfigError("grid too short: the positive part must cover at least one decade");
  const double lo = *first;
  const double hi = grid.back();

  const double step = 1.0 / blocks_per_decade;
  auto edge = [&](long k) { return std::pow(10.0, static_cast<double>(k) * step); };
  long k = static_cast<long>(std::floor(std::log10(lo) * blocks_per_decade));
  while (edge(k) > lo * (1.0 + kEdgeSlack)) --k;
  while (edge(k + 1) <= lo * (1.0 - kEdgeSlack)) ++k;

  std::vector<BlockMaximum> blocks;
  std::size_t i = static_cast<std::size_t>(first - grid.begin());
  for (;; ++k) {
    const double left = edge(k);
    const double right = edge(k + 1);
    if (right > hi * (1.0 + kEdgeSlack)) break;
    const double left_cut = left * (1.0 - kEdgeSlack);
    const double right_cut = right * (1.0 - kEdgeSlack);
    while (i < grid.size() && grid[i] < left_cut) ++i;
    double best = -1.0;
    std::size_t j = i;
    for (; j < grid.size() && grid[j] < right_cut; ++j) best = std::max(best, std::abs(values[j]));
    i = j;
    // Skip the partially covered block below the first sample.
    if (best >= 0.0 && left >= lo * (1.0 - kEdgeSlack)) blocks.push_back({std::sqrt(left * right), left, right, best});
  }
  return blocks;
}

std::vector<BlockMaximum> envelope(const FourierTrace& trace, int blocks_per_decade) {
  return envelope(trace.xi, trace.values, blocks_per_decade);
}

DecayFit fit_decay(std::span<const BlockMaximum> blocks, double window_min, double window_max) {
  DecayFit fit;
  fit.window_min = window_min;
  fit.window_max = window_max;
  for (const auto& b : blocks)
    if (b.left >= window_min * (1.0 - kEdgeSlack) && b.right <= window_max * (1.0 + kEdgeSlack))
      fit.block_maxima.push_back(b);
  const std::size_t m = fit.block_maxima.size();
  if (m < 4) throw ConfigError("decay fit needs at least 4 blocks, got " + std::to_string(m));

  double mx = 0.0;
  double my = 0.0;
  for (const auto& b : fit.block_maxima) {
    if (!(b.value > 0.0)) throw NumericalError("block maximum is zero; cannot take logarithms");
    mx += std::log(b.center);
    my += std::log(b.value);
  }
  mx /= static_cast<double>(m);
  my /= static_cast<double>(m);
  double sxx = 0.0;
  double sxy = 0.0;
  for (const auto& b : fit.block_maxima) {
    const double dx = std::log(b.center) - mx;
    sxx += dx * dx;
    sxy += dx * (std::log(b.value) - my);
  }
  if (!(sxx > 0.0)) throw ConfigError("degenerate fit window: all block centers coincide");
  const double slope = sxy / sxx;
  const double intercept = my - slope * mx;
  double ssr = 0.0;
  for (const auto& b : fit.block_maxima) {
    const double r = std::log(b.value) - (intercept + slope * std::log(b.center));
    ssr += r * r;
  }
  fit.epsilon = -slope;
  fit.intercept = intercept;
  fit.stderr_epsilon = std::sqrt(ssr / static_cast<double>(m - 2) / sxx);
  if (!std::isfinite(window_max)) fit.window_max = fit.block_maxima.back().right;
  return fit;
}

int min_power_for_l2(double epsilon) {
  if (!(epsilon > 0.0) || !std::isfinite(epsilon))
    throw ConfigError("no finite convolution power is certified for epsilon <= 0");
  const double estimate = std::floor(1.0 / (2.0 * epsilon)) + 1.0;
  if (estimate > static_cast<double>(std::numeric_limits<int>::max() / 2))
    throw ConfigError("epsilon too small: convolution power overflows");
  auto n = static_cast<int>(estimate);
  // Settle floating-point ties so that N * eps > 1/2 >= (N - 1) * eps as evaluated.
  while (static_cast<double>(n) * epsilon <= 0.5) ++n;
  while (n > 1 && static_cast<double>(n - 1) * epsilon > 0.5) --n;
  return n;
}

std::vector<double> l2_growth_diagnostic(const FourierTrace& trace, int power, std::span<const double> cutoffs) {
  if (power < 1) throw ConfigError("power must be at least 1");
  const auto& xi = trace.xi;
  if (xi.empty() || std::abs(xi.front()) > kEdgeSlack) throw ConfigError("trace must start at xi = 0");
  for (std::size_t c = 1; c < cutoffs.size(); ++c)
    if (!(cutoffs[c] > cutoffs[c - 1])) throw ConfigError("cutoffs must be increasing");
  if (!cutoffs.empty() && cutoffs.back() > xi.back() * (1.0 + kEdgeSlack))
    throw ConfigError("trace does not reach the largest cutoff");

  auto integrand = [&](std::size_t i) { return std::pow(std::abs(trace.values[i]), 2 * power); };
  std::vector<double> out;
  out.reserve(cutoffs.size());
  double running = 0.0;  // integral over [0, xi[i]]
  std::size_t i = 0;
  for (double cut : cutoffs) {
    if (cut < 0.0) throw ConfigError("cutoffs must be nonnegative");
    while (i + 1 < xi.size() && xi[i + 1] <= cut) {
      running += 0.5 * (xi[i + 1] - xi[i]) * (integrand(i) + integrand(i + 1));
      ++i;
    }
    double partial = running;
    if (i + 1 < xi.size() && cut > xi[i]) {
      const double frac = (cut - xi[i]) / (xi[i + 1] - xi[i]);
      const double at_cut = integrand(i) + frac * (integrand(i + 1) - integrand(i));
      partial += 0.5 * (cut - xi[i]) * (integrand(i) + at_cut);
    }
    out.push_back(2.0 * partial);
  }
  return out;
}

std::vector<BlockMaximum> dyadic_block_maxima(std::span<const double> grid,
                                              std::span<const std::complex<double>> values, int j_min, int j_max) {
  if (grid.size() != values.size()) throw ConfigError("grid and values differ in length");
  if (j_max < j_min) throw ConfigError("empty dyadic range");
  std::vector<BlockMaximum> blocks;
  for (int j = j_min; j <= j_max; ++j) {
    const double left = std::ldexp(1.0, j);
    const double right = std::ldexp(1.0, j + 1);
    double best = -1.0;
    for (std::size_t i = 0; i < grid.size(); ++i)
      if (grid[i] >= left && grid[i] < right) best = std::max(best, std::abs(values[i]));
    if (best < 0.0) throw ConfigError("no samples in dyadic window [2^" + std::to_string(j) + ", 2^" +
                                      std::to_string(j + 1) + ")");
    blocks.push_back({std::sqrt(left * right), left, right, best});
  }
  return blocks;
}

}  // namespace quasispec
