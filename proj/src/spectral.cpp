#include "quasispec/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <string>

#include <Eigen/Eigenvalues>

#include "quasispec/error.hpp"
#include "quasispec/measures.hpp"
#include "quasispec/parallel.hpp"

namespace quasispec {

EigenSystem eigendecompose(const TridiagonalOperator& op) {
  const auto n = static_cast<Eigen::Index>(op.dimension());
  Eigen::VectorXd diag = Eigen::Map<const Eigen::VectorXd>(op.diag().data(), n);
  Eigen::VectorXd sub = Eigen::VectorXd::Ones(std::max<Eigen::Index>(n - 1, 0));
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver;
  solver.computeFromTridiagonal(diag, sub, Eigen::ComputeEigenvectors);
  if (solver.info() != Eigen::Success) throw NumericalError("tridiagonal eigensolver did not converge");
  return {solver.eigenvalues(), solver.eigenvectors()};
}

EigenSystem eigendecompose(const Eigen::MatrixXd& symmetric) {
  if (symmetric.rows() != symmetric.cols() || symmetric.rows() == 0)
    throw ConfigError("eigendecompose needs a nonempty square matrix");
  const double scale = std::max(1.0, symmetric.cwiseAbs().maxCoeff());
  if ((symmetric - symmetric.transpose()).cwiseAbs().maxCoeff() > 1e-12 * scale)
    throw ConfigError("eigendecompose needs a symmetric matrix");
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(symmetric, Eigen::ComputeEigenvectors);
  if (solver.info() != Eigen::Success) throw NumericalError("symmetric eigensolver did not converge");
  return {solver.eigenvalues(), solver.eigenvectors()};
}

AtomicMeasure spectral_measure(const EigenSystem& sys, const Eigen::VectorXcd& psi, double coalesce_tolerance) {
  if (psi.size() != sys.dimension()) throw ConfigError("state dimension does not match eigensystem");
  const Eigen::VectorXcd overlaps = sys.eigenvectors.transpose() * psi;
  std::vector<Atom> atoms(static_cast<std::size_t>(sys.dimension()));
  for (Eigen::Index j = 0; j < sys.dimension(); ++j)
    atoms[static_cast<std::size_t>(j)] = {sys.eigenvalues(j), std::norm(overlaps(j))};
  return AtomicMeasure(std::move(atoms), coalesce_tolerance);
}

AtomicMeasure site_spectral_measure(const TridiagonalOperator& op, long site, double coalesce_tolerance) {
  const std::size_t row = op.index_of(site);
  const auto partial = partial_eigensystem(op, std::span<const std::size_t>(&row, 1));
  std::vector<Atom> atoms(op.dimension());
  for (std::size_t j = 0; j < atoms.size(); ++j) {
    const double q = partial.rows(0, static_cast<Eigen::Index>(j));
    atoms[j] = {partial.eigenvalues(static_cast<Eigen::Index>(j)), q * q};
  }
  return AtomicMeasure(std::move(atoms), coalesce_tolerance);
}

namespace {

/// The site-0 spectral measure is invariant under reflecting the chain about
/// its center, so a pattern and its reverse share one key.
std::string mirror_key(const std::vector<std::uint8_t>& pattern) {
  std::string forward(pattern.begin(), pattern.end());
  std::string backward(pattern.rbegin(), pattern.rend());
  return std::min(forward, backward);
}

struct PatternCache {
  std::vector<std::size_t> slot_of;                   // per input pattern
  std::vector<const std::vector<std::uint8_t>*> representatives;  // per slot
};

/// At V = 0 every pattern gives the same operator, so all share one slot.
template <class PatternAt>
PatternCache group_patterns(std::size_t count, double coupling, PatternAt&& pattern_at) {
  PatternCache cache;
  cache.slot_of.resize(count);
  std::map<std::string, std::size_t> slots;
  for (std::size_t i = 0; i < count; ++i) {
    const auto& pattern = pattern_at(i);
    auto [it, inserted] = slots.try_emplace(coupling == 0.0 ? std::string() : mirror_key(pattern), cache.representatives.size());
    if (inserted) cache.representatives.push_back(&pattern);
    cache.slot_of[i] = it->second;
  }
  return cache;
}

std::vector<AtomicMeasure> solve_slots(const PatternCache& cache, const ModelParams& params, unsigned threads) {
  std::vector<AtomicMeasure> measures(cache.representatives.size());
  const double tol = model_coalesce_tolerance(params.coupling);
  parallel_for(measures.size(), threads, [&](std::size_t s) {
    const auto op = hamiltonian_from_pattern(*cache.representatives[s], params.half_width, params.coupling);
    measures[s] = site_spectral_measure(op, 0, tol);
  });
  return measures;
}

}  // namespace

DensityOfStates density_of_states(const ModelParams& params, const DensityOfStatesOptions& options) {
  ModelParams p = params;
  p.phase = 0.0;
  p.validate();
  const auto partition = phase_partition(p);
  const auto& intervals = partition.intervals;
  const auto cache = group_patterns(intervals.size(), p.coupling, [&](std::size_t i) -> const auto& { return intervals[i].pattern; });
  const auto measures = solve_slots(cache, p, options.threads);

  std::vector<Atom> atoms;
  for (std::size_t i = 0; i < intervals.size(); ++i) {
    const double w = intervals[i].length;
    for (const auto& a : measures[cache.slot_of[i]].atoms()) atoms.push_back({a.position, w * a.weight});
  }
  DensityOfStates out;
  out.measure = AtomicMeasure(std::move(atoms), model_coalesce_tolerance(p.coupling));
  out.breakpoint_count = partition.breakpoints.size();
  out.distinct_problems = measures.size();
  return out;
}

AtomicMeasure riemann_density_of_states(const ModelParams& params, std::size_t phase_count,
                                        const DensityOfStatesOptions& options) {
  if (phase_count == 0) throw ConfigError("phase count must be positive");
  ModelParams p = params;
  p.phase = 0.0;
  p.validate();
  std::vector<std::vector<std::uint8_t>> patterns(phase_count);
  for (std::size_t k = 0; k < phase_count; ++k)
    patterns[k] = potential_pattern(static_cast<double>(k) / static_cast<double>(phase_count), p);
  const auto cache = group_patterns(phase_count, p.coupling, [&](std::size_t i) -> const auto& { return patterns[i]; });
  const auto measures = solve_slots(cache, p, options.threads);

  std::vector<double> counts(measures.size(), 0.0);
  for (auto s : cache.slot_of) counts[s] += 1.0;
  std::vector<Atom> atoms;
  for (std::size_t s = 0; s < measures.size(); ++s) {
    const double w = counts[s] / static_cast<double>(phase_count);
    for (const auto& a : measures[s].atoms()) atoms.push_back({a.position, w * a.weight});
  }
  return AtomicMeasure(std::move(atoms), model_coalesce_tolerance(p.coupling));
}

std::vector<double> default_tensor_check_grid() {
  std::vector<double> grid(200);
  for (std::size_t i = 0; i < grid.size(); ++i) grid[i] = 20.0 * static_cast<double>(i) / 199.0;
  return grid;
}

double tensor_spectral_check(std::span<const Eigen::MatrixXd> factors, std::span<const Eigen::VectorXcd> states,
                             std::span<const double> xi_grid, std::size_t dimension_cap) {
  if (factors.size() != states.size() || factors.empty())
    throw ConfigError("tensor check needs one state per factor");
  std::vector<double> grid(xi_grid.begin(), xi_grid.end());
  if (grid.empty()) grid = default_tensor_check_grid();

  const Eigen::MatrixXd product_op = tensor_sum(factors, dimension_cap);
  const Eigen::VectorXcd product_state = tensor_product(states, dimension_cap);
  const auto direct = spectral_measure(eigendecompose(product_op), product_state);

  AtomicMeasure convolved = AtomicMeasure::point_mass(0.0);
  for (std::size_t k = 0; k < factors.size(); ++k) {
    if (states[k].size() != factors[k].rows()) throw ConfigError("state dimension does not match its factor");
    convolved = convolve_exact(convolved, spectral_measure(eigendecompose(factors[k]), states[k]));
  }

  const auto lhs = fourier(direct, grid);
  const auto rhs = fourier(convolved, grid);
  double worst = 0.0;
  for (std::size_t i = 0; i < grid.size(); ++i) worst = std::max(worst, std::abs(lhs.values[i] - rhs.values[i]));
  return worst;
}

}  // namespace quasispec
