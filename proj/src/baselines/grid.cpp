#include <algorithm>
#include <cmath>
#include <limits>
#include <map>

#include "oadmm/baselines/grid.hpp"

namespace oadmm::baselines {

IntersectionGrid::IntersectionGrid(const GridConfig& config) : config_(config) {
  table_.resize(static_cast<size_t>(cell_count()));
}

int IntersectionGrid::cell_at(const Eigen::Vector2d& point) const {
  const double half = 0.5 * config_.extent;
  const Eigen::Vector2d local = point - config_.center;
  if (std::abs(local.x()) >= half || std::abs(local.y()) >= half) return -1;
  const double cell_size = config_.extent / config_.fidelity;
  const int col = static_cast<int>((local.x() + half) / cell_size);
  const int row = static_cast<int>((local.y() + half) / cell_size);
  return row * config_.fidelity + col;
}

bool IntersectionGrid::interval_free(int cell, double entry, double exit,
                                     int vehicle) const {
  for (const Reservation& res : table_[static_cast<size_t>(cell)]) {
    if (res.vehicle == vehicle) continue;
    if (entry < res.exit && res.entry < exit) return false;
  }
  return true;
}

void IntersectionGrid::reserve(int cell, int vehicle, double entry,
                               double exit) {
  table_[static_cast<size_t>(cell)].push_back(
      Reservation{vehicle, entry, exit});
}

void IntersectionGrid::release_vehicle(int vehicle) {
  for (std::vector<Reservation>& cell : table_) {
    cell.erase(std::remove_if(cell.begin(), cell.end(),
                              [vehicle](const Reservation& r) {
                                return r.vehicle == vehicle;
                              }),
               cell.end());
  }
}

void IntersectionGrid::release(int cell, int vehicle) {
  std::vector<Reservation>& reservations = table_[static_cast<size_t>(cell)];
  reservations.erase(std::remove_if(reservations.begin(), reservations.end(),
                                    [vehicle](const Reservation& r) {
                                      return r.vehicle == vehicle;
                                    }),
                     reservations.end());
}

bool IntersectionGrid::has_conflicting_reservations() const {
  for (const std::vector<Reservation>& cell : table_) {
    for (size_t i = 0; i < cell.size(); ++i) {
      for (size_t j = i + 1; j < cell.size(); ++j) {
        if (cell[i].vehicle == cell[j].vehicle) continue;
        if (cell[i].entry < cell[j].exit && cell[j].entry < cell[i].exit) {
          return true;
        }
      }
    }
  }
  return false;
}

std::vector<PathCell> path_cells(const sim::ReferencePath& path,
                                 const IntersectionGrid& grid, double radius,
                                 double half_length, double sample_ds) {
  // Sample the centerline; at each sample cover the cells reachable by a
  // disc of the body radius, then extend each cell's interval by the body
  // half-length fore and aft.
  std::map<int, std::pair<double, double>> intervals;
  const double total = path.length();
  for (double s = 0.0; s <= total; s += sample_ds) {
    const Eigen::Vector2d p = path.position(s);
    for (double dx = -radius; dx <= radius + 1e-9; dx += radius) {
      for (double dy = -radius; dy <= radius + 1e-9; dy += radius) {
        const int cell = grid.cell_at(p + Eigen::Vector2d(dx, dy));
        if (cell < 0) continue;
        auto it = intervals.find(cell);
        if (it == intervals.end()) {
          intervals.emplace(cell, std::make_pair(s, s));
        } else {
          it->second.first = std::min(it->second.first, s);
          it->second.second = std::max(it->second.second, s);
        }
      }
    }
  }
  std::vector<PathCell> cells;
  cells.reserve(intervals.size());
  for (const auto& [cell, range] : intervals) {
    cells.push_back(PathCell{cell, std::max(0.0, range.first - half_length),
                             std::min(total, range.second + half_length)});
  }
  std::sort(cells.begin(), cells.end(),
            [](const PathCell& a, const PathCell& b) {
              return a.s_enter < b.s_enter ||
                     (a.s_enter == b.s_enter && a.cell < b.cell);
            });
  return cells;
}

}  // namespace oadmm::baselines
