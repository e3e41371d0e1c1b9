#pragma once

#include <Eigen/Dense>
#include <vector>

#include "oadmm/sim/path.hpp"

namespace oadmm::baselines {

struct GridConfig {
  double extent = 18.0;  // square side length (m), centered on the intersection
  int fidelity = 8;      // cells per side: 1, 4, or 8
  Eigen::Vector2d center{0.0, 0.0};
};

/// Time-interval reservation table over the intersection grid.
class IntersectionGrid {
 public:
  explicit IntersectionGrid(const GridConfig& config);

  int fidelity() const { return config_.fidelity; }
  int cell_count() const { return config_.fidelity * config_.fidelity; }

  /// Cell index containing the point, or -1 outside the grid extent.
  int cell_at(const Eigen::Vector2d& point) const;

  struct Reservation {
    int vehicle = -1;
    double entry = 0.0;
    double exit = 0.0;  // may be +infinity for open-ended locks
  };

  /// True when [entry, exit] on `cell` overlaps no reservation held by
  /// another vehicle.
  bool interval_free(int cell, double entry, double exit, int vehicle) const;

  void reserve(int cell, int vehicle, double entry, double exit);
  /// Removes this vehicle's reservations (all cells).
  void release_vehicle(int vehicle);
  /// Removes this vehicle's reservation on one cell.
  void release(int cell, int vehicle);

  const std::vector<Reservation>& reservations(int cell) const {
    return table_[static_cast<size_t>(cell)];
  }

  /// Invariant probe: any instant where a cell carries overlapping
  /// reservations from two vehicles.
  bool has_conflicting_reservations() const;

 private:
  GridConfig config_;
  std::vector<std::vector<Reservation>> table_;
};

/// One cell visited by a vehicle's path, with the arc-length interval over
/// which any part of the vehicle body covers the cell.
struct PathCell {
  int cell = -1;
  double s_enter = 0.0;
  double s_exit = 0.0;
};

/// Cells covered along a reference path by a body of the given radius and
/// half-length, ordered by s_enter.
std::vector<PathCell> path_cells(const sim::ReferencePath& path,
                                 const IntersectionGrid& grid, double radius,
                                 double half_length, double sample_ds = 0.25);

}  // namespace oadmm::baselines
