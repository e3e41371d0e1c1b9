#pragma once

#include <memory>

#include "oadmm/baselines/grid.hpp"

namespace oadmm::baselines {

/// Per-vehicle data a grid protocol needs: the fixed path, reference speed,
/// and body dimensions for cell coverage.
struct BaselineVehicle {
  sim::ReferencePath path;
  double v_ref = 4.0;
  double radius = 1.0;
  double half_length = 2.0;
};

struct ProtocolLimits {
  double accel = 3.0;        // |a| bound for the speed controller (m/s^2)
  double brake = 3.0;        // deceleration used in stopping envelopes
  double stop_margin = 0.5;  // stop this far before a contested cell (m)
  double lookahead_time = 1.5;  // reactive claim window (s)
  double min_lookahead = 3.0;   // floor so stopped vehicles keep claiming (m)
  double time_margin = 0.3;     // predictive reservation padding (s)
};

/// Velocity-only conflict-resolution protocol over a reservation grid.
/// begin_tick runs at the world barrier with the (s, speed) snapshot in
/// vehicle-id order; speed_command answers from that snapshot.
class GridProtocol {
 public:
  GridProtocol(const GridConfig& grid_config,
               std::vector<BaselineVehicle> vehicles,
               const ProtocolLimits& limits);
  virtual ~GridProtocol() = default;

  virtual void begin_tick(double now, const std::vector<double>& s,
                          const std::vector<double>& speed) = 0;
  virtual double speed_command(int vehicle, double now) = 0;

  const IntersectionGrid& grid() const { return grid_; }

 protected:
  /// Braking-envelope speed: full reference speed when nothing is
  /// contested, else the speed that still stops `stop_margin` before
  /// `stop_s`.
  double envelope_speed(int vehicle, double s, double stop_s) const;

  IntersectionGrid grid_;
  std::vector<BaselineVehicle> vehicles_;
  std::vector<std::vector<PathCell>> cells_;  // per vehicle, ordered
  ProtocolLimits limits_;
};

std::unique_ptr<GridProtocol> make_reactive_protocol(
    const GridConfig& grid_config, std::vector<BaselineVehicle> vehicles,
    const ProtocolLimits& limits = {});

std::unique_ptr<GridProtocol> make_predictive_protocol(
    const GridConfig& grid_config, std::vector<BaselineVehicle> vehicles,
    const ProtocolLimits& limits = {});

}  // namespace oadmm::baselines
