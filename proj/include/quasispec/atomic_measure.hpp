#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace quasispec {

struct Atom {
  double position = 0.0;
  double weight = 0.0;

  friend bool operator==(const Atom&, const Atom&) = default;
};

inline constexpr double kDefaultCoalesceTolerance = 4e-12;

/// Finite nonnegative combination of point masses on the real line.
///
/// Atoms are kept sorted by position with positions strictly increasing:
/// construction sorts the input and merges runs of atoms whose positions lie
/// within `coalesce_tolerance` of the running group's weighted position (the
/// merged atom sits at the weighted mean). Atoms with weight exactly zero are
/// removed. `dropped_mass` records mass discarded by explicit pruning so that
/// approximations remain auditable; it is not part of total_mass().
class AtomicMeasure {
 public:
  AtomicMeasure() = default;
  explicit AtomicMeasure(std::vector<Atom> atoms, double coalesce_tolerance = kDefaultCoalesceTolerance);

  static AtomicMeasure point_mass(double position, double weight = 1.0);

  [[nodiscard]] std::span<const Atom> atoms() const { return atoms_; }
  [[nodiscard]] std::size_t size() const { return atoms_.size(); }
  [[nodiscard]] bool empty() const { return atoms_.empty(); }
  [[nodiscard]] double total_mass() const;
  [[nodiscard]] double dropped_mass() const { return dropped_mass_; }

  /// Removes atoms lighter than relative_threshold * total_mass(), adding their
  /// weight to dropped_mass().
  void prune(double relative_threshold);
  void add_dropped_mass(double mass) { dropped_mass_ += mass; }

  /// Integral of E^k against the measure.
  [[nodiscard]] double moment(int order) const;

 private:
  std::vector<Atom> atoms_;
  double dropped_mass_ = 0.0;
};

/// sup_E |a(E) - b(E)| = half the l1 distance of the weights after aligning
/// atoms that lie within `tolerance` of each other.
double total_variation_distance(const AtomicMeasure& a, const AtomicMeasure& b,
                                double tolerance = kDefaultCoalesceTolerance);

}  // namespace quasispec
