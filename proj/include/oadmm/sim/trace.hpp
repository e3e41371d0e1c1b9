#pragma once

#include <array>
#include <cmath>
#include <string>
#include <vector>

namespace oadmm::sim {

/// Recorded run of one world: per-tick vehicle states and pairwise
/// clearances, completion times, and solver diagnostics.
struct WorldTrace {
  double control_dt = 0.05;
  int vehicle_count = 0;

  std::vector<double> times;
  // per tick, per vehicle: x, y, speed
  std::vector<std::vector<std::array<double, 3>>> states;
  // per tick, per (i<j) pair in lexicographic order
  std::vector<std::vector<double>> clearances;

  std::vector<double> completion_times;  // NaN while unfinished
  bool timed_out = false;
  double duration = 0.0;
  double min_clearance = std::numeric_limits<double>::infinity();

  int degraded_ticks = 0;
  int relaxed_ticks = 0;
  long dominance_checked = 0;
  long dominance_holds = 0;

  bool all_finished() const {
    for (double t : completion_times) {
      if (std::isnan(t)) return false;
    }
    return !completion_times.empty();
  }

  static int pair_index(int i, int j, int n);
  int pair_count() const { return vehicle_count * (vehicle_count - 1) / 2; }
};

/// CSV rows (tick, vehicle, x, y, v, min_clearance); min_clearance is the
/// minimum over pairs involving that vehicle, empty for a lone vehicle.
std::string trace_to_csv(const WorldTrace& trace);

}  // namespace oadmm::sim
