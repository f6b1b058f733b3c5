#include "quasispec/atomic_measure.hpp"

#include <algorithm>
#include <cmath>

#include "quasispec/error.hpp"

namespace quasispec {

AtomicMeasure::AtomicMeasure(std::vector<Atom> atoms, double coalesce_tolerance) {
  for (const auto& a : atoms) {
    if (!(a.weight >= 0.0) || !std::isfinite(a.position))
      throw ConfigError("atomic measures need finite positions and nonnegative weights");
  }
  std::stable_sort(atoms.begin(), atoms.end(),
                   [](const Atom& x, const Atom& y) { return x.position < y.position; });
  atoms_.reserve(atoms.size());
  double group_weight = 0.0;
  double group_moment = 0.0;  // sum of weight * position
  double group_anchor = 0.0;
  bool open = false;
  auto flush = [&] {
    if (!open) return;
    if (group_weight > 0.0) atoms_.push_back({group_moment / group_weight, group_weight});
    open = false;
  };
  for (const auto& a : atoms) {
    if (a.weight == 0.0) continue;
    if (open && a.position - group_anchor <= coalesce_tolerance) {
      group_weight += a.weight;
      group_moment += a.weight * a.position;
      group_anchor = group_moment / group_weight;
      continue;
    }
    flush();
    open = true;
    group_weight = a.weight;
    group_moment = a.weight * a.position;
    group_anchor = a.position;
  }
  flush();
}

AtomicMeasure AtomicMeasure::point_mass(double position, double weight) {
  return AtomicMeasure({Atom{position, weight}});
}

double AtomicMeasure::total_mass() const {
  double total = 0.0;
  for (const auto& a : atoms_) total += a.weight;
  return total;
}

void AtomicMeasure::prune(double relative_threshold) {
  const double cutoff = relative_threshold * total_mass();
  double dropped = 0.0;
  std::erase_if(atoms_, [&](const Atom& a) {
    if (a.weight < cutoff) {
      dropped += a.weight;
      return true;
    }
    return false;
  });
  dropped_mass_ += dropped;
}

double AtomicMeasure::moment(int order) const {
  double total = 0.0;
  for (const auto& a : atoms_) total += a.weight * std::pow(a.position, order);
  return total;
}

double total_variation_distance(const AtomicMeasure& a, const AtomicMeasure& b, double tolerance) {
  const auto x = a.atoms();
  const auto y = b.atoms();
  std::size_t i = 0;
  std::size_t j = 0;
  double l1 = 0.0;
  while (i < x.size() || j < y.size()) {
    if (j == y.size() || (i < x.size() && x[i].position < y[j].position - tolerance)) {
      l1 += x[i++].weight;
    } else if (i == x.size() || y[j].position < x[i].position - tolerance) {
      l1 += y[j++].weight;
    } else {
      l1 += std::abs(x[i++].weight - y[j++].weight);
    }
  }
  return 0.5 * l1;
}

}  // namespace quasispec
