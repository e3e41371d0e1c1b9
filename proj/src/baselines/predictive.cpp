#include <algorithm>
#include <cmath>
#include <limits>

#include "oadmm/baselines/protocol.hpp"

namespace oadmm::baselines {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

/// Timeslot protocol: the reservation table is rebuilt at every barrier in
/// vehicle-id order (id breaks ties); each vehicle predicts its per-cell
/// occupancy intervals, shifts entries behind standing reservations, and
/// shapes a reduced cruise speed over the whole approach instead of
/// braking at the cell edge. When no feasible approach speed exists it
/// falls back to a reactive stop for this tick.
class PredictiveProtocol final : public GridProtocol {
 public:
  using GridProtocol::GridProtocol;

  void begin_tick(double now, const std::vector<double>& s,
                  const std::vector<double>& speed) override {
    commands_.assign(vehicles_.size(), 0.0);
    for (size_t i = 0; i < vehicles_.size(); ++i) {
      grid_.release_vehicle(static_cast<int>(i));
    }
    for (size_t i = 0; i < vehicles_.size(); ++i) {
      commands_[i] = plan_vehicle(static_cast<int>(i), now, s[i], speed[i]);
    }
  }

  double speed_command(int vehicle, double /*now*/) override {
    return commands_[static_cast<size_t>(vehicle)];
  }

 private:
  // Arrival time at a path position under a two-phase speed plan: `slow`
  // until arc length `s_star`, reference speed afterwards.
  static double time_to(double target_s, double s0, double now, double slow,
                        double s_star, double v_ref) {
    if (target_s <= s0) return now;
    double t = now;
    double s = s0;
    if (slow < v_ref && s < s_star) {
      const double slow_until = std::min(target_s, s_star);
      if (slow <= 1e-6) return kInf;
      t += (slow_until - s) / slow;
      s = slow_until;
    }
    if (target_s > s) t += (target_s - s) / v_ref;
    return t;
  }

  struct CellTimes {
    double entry = 0.0;
    double exit = 0.0;
  };

  CellTimes times_for(const PathCell& cell, double s, double now, double slow,
                      double s_star, double v_ref) const {
    CellTimes out;
    out.entry = time_to(cell.s_enter, s, now, slow, s_star, v_ref) -
                limits_.time_margin;
    out.exit = time_to(cell.s_exit, s, now, slow, s_star, v_ref) +
               limits_.time_margin;
    return out;
  }

  // Earliest entry at or after `earliest` that avoids every standing
  // reservation on the cell (other vehicles only).
  double shifted_entry(int id, int cell, double earliest, double hold) const {
    double entry = earliest;
    for (int scan = 0; scan < 32; ++scan) {
      bool blocked = false;
      for (const auto& reservation : grid_.reservations(cell)) {
        if (reservation.vehicle == id) continue;
        if (entry < reservation.exit && reservation.entry < entry + hold) {
          entry = reservation.exit;
          blocked = true;
        }
      }
      if (!blocked) break;
    }
    return entry;
  }

  double plan_vehicle(int id, double now, double s, double /*speed*/) {
    const BaselineVehicle& vehicle = vehicles_[static_cast<size_t>(id)];
    const std::vector<PathCell>& cells = cells_[static_cast<size_t>(id)];
    const double v_ref = vehicle.v_ref;

    double slow = v_ref;
    double s_star = 0.0;
    bool stop_fallback = false;
    double stop_s = kInf;

    for (int pass = 0; pass < 6 && !stop_fallback; ++pass) {
      bool changed = false;
      for (const PathCell& cell : cells) {
        if (s > cell.s_exit) continue;
        const CellTimes t = times_for(cell, s, now, slow, s_star, v_ref);
        if (grid_.interval_free(cell.cell, t.entry, t.exit, id)) continue;

        const double entry =
            shifted_entry(id, cell.cell, t.entry, t.exit - t.entry);
        if (cell.s_enter <= s + 1e-6) {
          // already inside the contested cell; nothing left to shape
          continue;
        }
        const double v_req =
            (cell.s_enter - s) / (entry + limits_.time_margin - now);
        if (!(v_req > 0.05)) {
          stop_fallback = true;
          stop_s = std::min(stop_s, cell.s_enter);
          break;
        }
        if (v_req < slow - 1e-9) {
          slow = v_req;
          s_star = std::max(s_star, cell.s_enter);
          changed = true;
        } else if (cell.s_enter > s_star) {
          s_star = cell.s_enter;
          changed = true;
        }
      }
      if (!changed) break;
    }

    if (!stop_fallback) {
      // Final verification pass; anything still conflicting forces a stop.
      for (const PathCell& cell : cells) {
        if (s > cell.s_exit) continue;
        const CellTimes t = times_for(cell, s, now, slow, s_star, v_ref);
        if (!grid_.interval_free(cell.cell, t.entry, t.exit, id) &&
            cell.s_enter > s + 1e-6) {
          stop_fallback = true;
          stop_s = std::min(stop_s, cell.s_enter);
        }
      }
    }

    if (stop_fallback) {
      for (const PathCell& cell : cells) {
        if (s >= cell.s_enter && s <= cell.s_exit &&
            grid_.interval_free(cell.cell, now, kInf, id)) {
          grid_.reserve(cell.cell, id, now, kInf);
        }
      }
      return envelope_speed(id, s, stop_s);
    }

    for (const PathCell& cell : cells) {
      if (s > cell.s_exit) continue;
      const CellTimes t = times_for(cell, s, now, slow, s_star, v_ref);
      grid_.reserve(cell.cell, id, t.entry, t.exit);
    }
    return slow;
  }

  std::vector<double> commands_;
};

}  // namespace

std::unique_ptr<GridProtocol> make_predictive_protocol(
    const GridConfig& grid_config, std::vector<BaselineVehicle> vehicles,
    const ProtocolLimits& limits) {
  return std::make_unique<PredictiveProtocol>(grid_config, std::move(vehicles),
                                              limits);
}

}  // namespace oadmm::baselines
