#include "quasispec/dynamics.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <string>

#include "quasispec/bessel.hpp"
#include "quasispec/error.hpp"
#include "quasispec/parallel.hpp"

namespace quasispec {

using cplx = std::complex<double>;

long support_radius(const SparseState& state) {
  long r = 0;
  for (const auto& a : state) r = std::max(r, std::labs(a.site));
  return r;
}

double norm(const SparseState& state) {
  double total = 0.0;
  for (const auto& a : state) total += std::norm(a.value);
  return std::sqrt(total);
}

SparseState shifted(const SparseState& phi, long k) {
  SparseState out = phi;
  for (auto& a : out) a.site -= k;
  return out;
}

StateVector::StateVector(int half_width, Eigen::VectorXcd amplitudes)
    : half_width_(half_width), amplitudes_(std::move(amplitudes)) {
  if (half_width < 0 || amplitudes_.size() != 2 * static_cast<Eigen::Index>(half_width) + 1)
    throw ConfigError("state vector length must equal 2L+1");
}

StateVector StateVector::delta(long site, int half_width) {
  return from_sparse({{site, 1.0}}, half_width);
}

StateVector StateVector::from_sparse(const SparseState& state, int half_width) {
  Eigen::VectorXcd v = Eigen::VectorXcd::Zero(2 * static_cast<Eigen::Index>(half_width) + 1);
  for (const auto& a : state) {
    if (std::labs(a.site) > half_width)
      throw ConfigError("site " + std::to_string(a.site) + " lies outside [-L, L]");
    v(a.site + half_width) += a.value;
  }
  return {half_width, std::move(v)};
}

cplx StateVector::at(long site) const {
  if (std::labs(site) > half_width_) return 0.0;
  return amplitudes_(site + half_width_);
}

cplx inner(const StateVector& u, const StateVector& v) {
  if (u.half_width() != v.half_width()) throw ConfigError("inner product of states on different lattices");
  return v.amplitudes().dot(u.amplitudes());  // Eigen's dot conjugates its left operand
}

std::vector<double> linear_grid(double lo, double hi, std::size_t points) {
  if (points == 0) return {};
  if (points == 1) return {lo};
  std::vector<double> grid(points);
  for (std::size_t i = 0; i < points; ++i)
    grid[i] = lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(points - 1);
  grid.back() = hi;
  return grid;
}

std::vector<double> log_grid(double lo, double hi, std::size_t points) {
  if (!(lo > 0.0) || !(hi >= lo)) throw ConfigError("log grid needs 0 < lo <= hi");
  auto grid = linear_grid(std::log(lo), std::log(hi), points);
  for (auto& g : grid) g = std::exp(g);
  if (!grid.empty()) {
    grid.front() = lo;
    grid.back() = hi;
  }
  return grid;
}

StateVector evolve_exact(const EigenSystem& sys, const StateVector& psi, double t) {
  if (psi.amplitudes().size() != sys.dimension()) throw ConfigError("state dimension does not match eigensystem");
  Eigen::VectorXcd coeff = sys.eigenvectors.transpose() * psi.amplitudes();
  for (Eigen::Index j = 0; j < coeff.size(); ++j) coeff(j) *= std::polar(1.0, t * sys.eigenvalues(j));
  return {psi.half_width(), sys.eigenvectors * coeff};
}

double chebyshev_scale(const TridiagonalOperator& op) { return std::max(2.0 + op.coupling(), op.norm_bound()); }

int default_degree_cap(double scale, double t) { return static_cast<int>(4.0 * scale * std::abs(t)) + 200; }

namespace {

/// i^k
cplx i_power(int k) {
  switch (k & 3) {
    case 0: return {1.0, 0.0};
    case 1: return {0.0, 1.0};
    case 2: return {-1.0, 0.0};
    default: return {0.0, -1.0};
  }
}

/// Dense working vector padded by one zero on each side so the stencil needs
/// no edge branches. Element of lattice index i lives at data[i + 1].
template <class S>
struct Padded {
  std::vector<S> data;
  explicit Padded(std::size_t n) : data(n + 2, S{}) {}
  S& operator[](std::size_t i) { return data[i + 1]; }
  const S& operator[](std::size_t i) const { return data[i + 1]; }
};

/// Active index window [lo, hi] of the iterates (grows by one per step).
struct Window {
  std::size_t lo;
  std::size_t hi;
  void grow(std::size_t n) {
    if (lo > 0) --lo;
    if (hi + 1 < n) ++hi;
  }
};

/// out = f * (H/a) cur - (subtract ? out : 0) on the window.
template <class S>
void stencil(const std::vector<double>& diag, double f, const Padded<S>& cur, Padded<S>& out, Window w,
             bool subtract) {
  const S* c = cur.data.data() + 1;
  S* o = out.data.data() + 1;
  const double* d = diag.data();
  if (subtract) {
    for (std::size_t i = w.lo; i <= w.hi; ++i) o[i] = f * (c[i - 1] + d[i] * c[i] + c[i + 1]) - o[i];
  } else {
    for (std::size_t i = w.lo; i <= w.hi; ++i) o[i] = f * (c[i - 1] + d[i] * c[i] + c[i + 1]);
  }
}

struct IndexedAmplitude {
  std::size_t index;
  cplx conj_value;
};

std::vector<IndexedAmplitude> index_state(const SparseState& s, int half_width) {
  std::vector<IndexedAmplitude> out;
  for (const auto& a : s) {
    if (std::labs(a.site) > half_width) throw ConfigError("state support lies outside [-L, L]");
    out.push_back({static_cast<std::size_t>(a.site + half_width), std::conj(a.value)});
  }
  return out;
}

template <class S>
cplx project(const Padded<S>& v, const std::vector<IndexedAmplitude>& phi) {
  cplx total = 0.0;
  for (const auto& p : phi) total += cplx(v[p.index]) * p.conj_value;
  return total;
}

template <class S>
double self_dot(const Padded<S>& v, Window w) {
  double total = 0.0;
  for (std::size_t i = w.lo; i <= w.hi; ++i) total += std::norm(cplx(v[i]));
  return total;
}

template <class S>
cplx cross_dot(const Padded<S>& u, const Padded<S>& v, Window w) {
  cplx total = 0.0;
  for (std::size_t i = w.lo; i <= w.hi; ++i) total += cplx(u[i]) * std::conj(cplx(v[i]));
  return total;
}

template <class S>
std::vector<cplx> moments_kernel(const TridiagonalOperator& op, const SparseState& psi, const SparseState& phi,
                                 int degree, bool symmetric) {
  const std::size_t n = op.dimension();
  const double inv_a = 1.0 / chebyshev_scale(op);
  const auto& diag = op.diag();
  const auto phi_idx = index_state(phi, op.half_width());

  Padded<S> prev(n);
  Padded<S> cur(n);
  Window w{n, 0};
  for (const auto& a : psi) {
    const std::size_t i = op.index_of(a.site);
    if constexpr (std::is_same_v<S, double>) {
      prev[i] += a.value.real();
    } else {
      prev[i] += a.value;
    }
    w.lo = std::min(w.lo, i);
    w.hi = std::max(w.hi, i);
  }
  std::vector<cplx> m(static_cast<std::size_t>(degree) + 1, 0.0);
  if (psi.empty()) return m;

  if (!symmetric) {
    m[0] = project(prev, phi_idx);
    if (degree == 0) return m;
    w.grow(n);
    stencil(diag, inv_a, prev, cur, w, false);
    m[1] = project(cur, phi_idx);
    for (int k = 2; k <= degree; ++k) {
      w.grow(n);
      stencil(diag, 2.0 * inv_a, cur, prev, w, true);
      std::swap(prev, cur);
      m[static_cast<std::size_t>(k)] = project(cur, phi_idx);
    }
    return m;
  }

  // psi == phi: m_{2k} = 2<v_k, v_k> - m_0 and m_{2k+1} = 2<v_{k+1}, v_k> - m_1.
  m[0] = self_dot(prev, w);
  if (degree == 0) return m;
  Window w0 = w;
  w.grow(n);
  stencil(diag, inv_a, prev, cur, w, false);
  m[1] = cross_dot(cur, prev, w0);
  // Invariant: prev = v_k, cur = v_{k+1}, w covers v_{k+1}.
  for (int k = 1;; ++k) {
    const auto even = static_cast<std::size_t>(2 * k);
    if (even > static_cast<std::size_t>(degree)) break;
    m[even] = 2.0 * self_dot(cur, w) - m[0];
    if (even + 1 > static_cast<std::size_t>(degree)) break;
    const Window wk = w;
    w.grow(n);
    stencil(diag, 2.0 * inv_a, cur, prev, w, true);
    std::swap(prev, cur);
    m[even + 1] = 2.0 * cross_dot(cur, prev, wk) - m[1];
  }
  return m;
}

bool is_real(const SparseState& s) {
  return std::all_of(s.begin(), s.end(), [](const SiteAmplitude& a) { return a.value.imag() == 0.0; });
}

bool same_state(const SparseState& a, const SparseState& b) {
  if (a.size() != b.size()) return false;
  for (std::size_t i = 0; i < a.size(); ++i)
    if (a[i].site != b[i].site || a[i].value != b[i].value) return false;
  return true;
}

bool has_distinct_sites(const SparseState& s) {
  for (std::size_t i = 0; i < s.size(); ++i)
    for (std::size_t j = i + 1; j < s.size(); ++j)
      if (s[i].site == s[j].site) return false;
  return true;
}

/// psi(-n) == psi(n) for every site.
bool mirror_symmetric(const SparseState& s) {
  std::map<long, cplx> values;
  for (const auto& a : s) values[a.site] += a.value;
  for (const auto& [site, v] : values) {
    auto it = values.find(-site);
    if (it == values.end() || it->second != v) return false;
  }
  return true;
}

}  // namespace

std::vector<cplx> chebyshev_moments(const TridiagonalOperator& op, const SparseState& psi, const SparseState& phi,
                                    int degree) {
  if (degree < 0) throw ConfigError("Chebyshev degree must be nonnegative");
  const bool symmetric = same_state(psi, phi) && has_distinct_sites(psi);
  if (is_real(psi)) return moments_kernel<double>(op, psi, phi, degree, symmetric);
  return moments_kernel<cplx>(op, psi, phi, degree, symmetric);
}

AmplitudeSeries amplitude_from_moments(std::span<const cplx> moments, double scale, std::span<const double> t_grid,
                                       double tol) {
  if (moments.empty()) throw ConfigError("no Chebyshev moments given");
  AmplitudeSeries series;
  series.t.assign(t_grid.begin(), t_grid.end());
  series.values.resize(t_grid.size());
  const int available = static_cast<int>(moments.size()) - 1;
  for (std::size_t i = 0; i < t_grid.size(); ++i) {
    const double x = scale * t_grid[i];
    const int needed = chebyshev_degree(x, tol);
    if (needed > available)
      throw CapExceeded("time " + std::to_string(t_grid[i]) + " needs Chebyshev degree " + std::to_string(needed) +
                        " but only " + std::to_string(available) + " moments are available");
    const auto j = bessel_j_sequence(needed, x);
    cplx total = j[0] * moments[0];
    for (int k = 1; k <= needed; ++k) total += 2.0 * j[static_cast<std::size_t>(k)] * i_power(k) * moments[static_cast<std::size_t>(k)];
    series.values[i] = total;
  }
  return series;
}

StateVector evolve_chebyshev(const TridiagonalOperator& op, const StateVector& psi, double t, double tol,
                             int degree_cap) {
  if (!(tol > 0.0)) throw ConfigError("Chebyshev tolerance must be positive");
  const std::size_t n = op.dimension();
  if (static_cast<std::size_t>(psi.amplitudes().size()) != n || psi.half_width() != op.half_width())
    throw ConfigError("state dimension does not match operator");
  const double a = chebyshev_scale(op);
  const double x = a * t;
  const int cap = degree_cap < 0 ? default_degree_cap(a, t) : degree_cap;
  const int degree = chebyshev_degree(x, tol);
  if (degree > cap)
    throw CapExceeded("Chebyshev propagation needs degree " + std::to_string(degree) + ", cap is " +
                      std::to_string(cap));
  const auto j = bessel_j_sequence(degree, x);
  const double inv_a = 1.0 / a;
  const auto& diag = op.diag();

  Padded<cplx> prev(n);
  Padded<cplx> cur(n);
  Window w{n, 0};
  for (std::size_t i = 0; i < n; ++i) {
    prev[i] = psi.amplitudes()(static_cast<Eigen::Index>(i));
    if (prev[i] != cplx{}) {
      w.lo = std::min(w.lo, i);
      w.hi = std::max(w.hi, i);
    }
  }
  Eigen::VectorXcd result = Eigen::VectorXcd::Zero(static_cast<Eigen::Index>(n));
  if (w.lo > w.hi) return {psi.half_width(), result};

  auto accumulate = [&](const Padded<cplx>& v, cplx c) {
    for (std::size_t i = w.lo; i <= w.hi; ++i) result(static_cast<Eigen::Index>(i)) += c * v[i];
  };
  accumulate(prev, j[0]);
  if (degree >= 1) {
    w.grow(n);
    stencil(diag, inv_a, prev, cur, w, false);
    accumulate(cur, 2.0 * j[1] * i_power(1));
  }
  for (int k = 2; k <= degree; ++k) {
    w.grow(n);
    stencil(diag, 2.0 * inv_a, cur, prev, w, true);
    std::swap(prev, cur);
    accumulate(cur, 2.0 * j[static_cast<std::size_t>(k)] * i_power(k));
  }
  return {psi.half_width(), std::move(result)};
}

int light_cone_min_half_width(const SparseState& psi, const SparseState& phi, double t_max) {
  const double needed = (2.0 * std::abs(t_max) + 50.0 + static_cast<double>(support_radius(psi)) +
                         static_cast<double>(support_radius(phi))) / 2.0;
  return static_cast<int>(std::ceil(needed));
}

void check_light_cone(const SparseState& psi, const SparseState& phi, double t_max, int half_width) {
  if (std::max(support_radius(psi), support_radius(phi)) > half_width)
    throw LightConeViolation("state support exceeds the truncation window");
  const int needed = light_cone_min_half_width(psi, phi, t_max);
  if (half_width < needed)
    throw LightConeViolation("half width " + std::to_string(half_width) + " is below the light-cone bound " +
                             std::to_string(needed) + " for t_max = " + std::to_string(t_max));
}

AmplitudeSeries phase_averaged_amplitude(const SparseState& psi, const SparseState& phi,
                                         std::span<const double> t_grid, const ModelParams& params,
                                         const AverageOptions& options) {
  ModelParams p = params;
  p.phase = 0.0;
  p.validate();
  if (!(options.tol > 0.0)) throw ConfigError("tolerance must be positive");
  double t_max = 0.0;
  for (double t : t_grid) t_max = std::max(t_max, std::abs(t));
  if (options.enforce_light_cone) check_light_cone(psi, phi, t_max, p.half_width);
  // Validates supports even when the light cone is not enforced.
  (void)StateVector::from_sparse(psi, p.half_width);
  (void)StateVector::from_sparse(phi, p.half_width);

  const auto partition = phase_partition(p);
  const auto& intervals = partition.intervals;
  const bool mirror = mirror_symmetric(psi) && mirror_symmetric(phi);

  std::map<std::string, std::size_t> slots;
  std::vector<std::size_t> slot_of(intervals.size());
  std::vector<std::size_t> slot_interval;
  for (std::size_t i = 0; i < intervals.size(); ++i) {
    const auto& pat = intervals[i].pattern;
    std::string key(pat.begin(), pat.end());
    if (mirror) key = std::min(key, std::string(pat.rbegin(), pat.rend()));
    if (p.coupling == 0.0) key.clear();
    auto [it, inserted] = slots.try_emplace(std::move(key), slot_interval.size());
    if (inserted) slot_interval.push_back(i);
    slot_of[i] = it->second;
  }

  const double a = 2.0 + p.coupling;
  const int degree = chebyshev_degree(a * t_max, options.tol);
  std::vector<std::vector<cplx>> slot_moments(slot_interval.size());
  parallel_for(slot_interval.size(), options.threads, [&](std::size_t s) {
    const auto op = hamiltonian_from_pattern(intervals[slot_interval[s]].pattern, p.half_width, p.coupling);
    slot_moments[s] = chebyshev_moments(op, psi, phi, degree);
  });

  std::vector<cplx> averaged(static_cast<std::size_t>(degree) + 1, 0.0);
  for (std::size_t i = 0; i < intervals.size(); ++i) {
    const double w = intervals[i].length;
    const auto& m = slot_moments[slot_of[i]];
    for (std::size_t k = 0; k < averaged.size(); ++k) averaged[k] += w * m[k];
  }
  return amplitude_from_moments(averaged, a, t_grid, options.tol);
}

double l1_decomposition_check(const SparseState& psi, const SparseState& phi, double t, const ModelParams& params,
                              const AverageOptions& options) {
  ModelParams enlarged = params;
  enlarged.half_width = params.half_width + static_cast<int>(support_radius(psi));
  const double grid[] = {t};
  const SparseState origin{{0, 1.0}};

  const cplx direct = phase_averaged_amplitude(psi, phi, grid, enlarged, options).values[0];
  cplx decomposed = 0.0;
  for (const auto& a : psi) {
    const auto moved = shifted(phi, a.site);
    decomposed += a.value * phase_averaged_amplitude(origin, moved, grid, enlarged, options).values[0];
  }
  return std::abs(direct - decomposed);
}

}  // namespace quasispec
