#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "oadmm/baselines/protocol.hpp"

namespace oadmm::baselines {

GridProtocol::GridProtocol(const GridConfig& grid_config,
                           std::vector<BaselineVehicle> vehicles,
                           const ProtocolLimits& limits)
    : grid_(grid_config), vehicles_(std::move(vehicles)), limits_(limits) {
  cells_.reserve(vehicles_.size());
  for (const BaselineVehicle& vehicle : vehicles_) {
    cells_.push_back(path_cells(vehicle.path, grid_, vehicle.radius,
                                vehicle.half_length));
  }
}

double GridProtocol::envelope_speed(int vehicle, double s, double stop_s) const {
  const double v_ref = vehicles_[static_cast<size_t>(vehicle)].v_ref;
  if (!std::isfinite(stop_s)) return v_ref;
  const double distance = stop_s - limits_.stop_margin - s;
  if (distance <= 0.0) return 0.0;
  return std::min(v_ref, std::sqrt(2.0 * limits_.brake * distance));
}

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

/// Reactive priority protocol. A vehicle may only enter the grid after
/// locking its entire cell corridor through it; cells release as the
/// vehicle passes them, and a vehicle that cannot lock every cell stops at
/// the grid boundary. Entry attempts run at the barrier in priority order
/// (vehicles already inside first, then by arrival at the contention zone,
/// then by id), so the earlier arrival wins and ties break by id. Atomic
/// corridor entry keeps stopped vehicles outside everyone's corridor,
/// which rules out hold-and-wait deadlocks.
class ReactiveProtocol final : public GridProtocol {
 public:
  using GridProtocol::GridProtocol;

  void begin_tick(double now, const std::vector<double>& s,
                  const std::vector<double>& speed) override {
    const size_t n = vehicles_.size();
    if (arrival_.size() != n) {
      arrival_.assign(n, kInf);
      entered_.assign(n, 0);
    }
    stop_targets_.assign(n, kInf);
    snapshot_s_ = s;

    for (size_t i = 0; i < n; ++i) grid_.release_vehicle(static_cast<int>(i));

    // Vehicles inside the grid re-assert their remaining corridor.
    for (size_t i = 0; i < n; ++i) {
      if (cells_[i].empty()) continue;
      if (!entered_[i] && s[i] >= cells_[i].front().s_enter - 1e-9) {
        entered_[i] = 1;
      }
      if (s[i] > cells_[i].back().s_exit) entered_[i] = 0;  // left the grid
      if (!entered_[i]) continue;
      for (const PathCell& cell : cells_[i]) {
        if (s[i] <= cell.s_exit) {
          grid_.reserve(cell.cell, static_cast<int>(i), now, kInf);
        }
      }
    }

    // Entry attempts, by arrival priority.
    std::vector<size_t> order(n);
    std::iota(order.begin(), order.end(), size_t{0});
    std::sort(order.begin(), order.end(), [&](size_t a, size_t b) {
      if (arrival_[a] != arrival_[b]) return arrival_[a] < arrival_[b];
      return a < b;
    });

    for (size_t i : order) {
      if (entered_[i] || cells_[i].empty()) continue;
      const double entry_s = cells_[i].front().s_enter;
      const double lookahead =
          std::max(limits_.lookahead_time * speed[i], limits_.min_lookahead);
      if (entry_s > s[i] + lookahead) continue;  // not contending yet
      if (arrival_[i] == kInf) arrival_[i] = now;

      const int id = static_cast<int>(i);
      bool corridor_free = true;
      for (const PathCell& cell : cells_[i]) {
        if (!grid_.interval_free(cell.cell, now, kInf, id)) {
          corridor_free = false;
          break;
        }
      }
      if (corridor_free) {
        for (const PathCell& cell : cells_[i]) {
          grid_.reserve(cell.cell, id, now, kInf);
        }
      } else {
        stop_targets_[i] = entry_s;
      }
    }
  }

  double speed_command(int vehicle, double /*now*/) override {
    return envelope_speed(vehicle, snapshot_s_[static_cast<size_t>(vehicle)],
                          stop_targets_[static_cast<size_t>(vehicle)]);
  }

 private:
  std::vector<double> arrival_;
  std::vector<char> entered_;
  std::vector<double> stop_targets_;
  std::vector<double> snapshot_s_;
};

}  // namespace

std::unique_ptr<GridProtocol> make_reactive_protocol(
    const GridConfig& grid_config, std::vector<BaselineVehicle> vehicles,
    const ProtocolLimits& limits) {
  return std::make_unique<ReactiveProtocol>(grid_config, std::move(vehicles),
                                            limits);
}

}  // namespace oadmm::baselines
