#pragma once

#include <Eigen/Dense>
#include <vector>

namespace oadmm::sim {

/// Arc-length parameterized path piece: straight line or circular arc.
struct PathSegment {
  enum class Type { kLine, kArc };
  Type type = Type::kLine;
  Eigen::Vector2d anchor{0.0, 0.0};  // line start / arc center
  Eigen::Vector2d dir{1.0, 0.0};     // line unit direction
  double radius = 0.0;               // arcs
  double angle0 = 0.0;               // arc start angle (rad)
  double sweep = 0.0;                // signed sweep (rad); +ccw
  double length = 0.0;

  Eigen::Vector2d position(double s) const;
  double heading(double s) const;
};

/// Piecewise line/arc reference path with projection queries.
class ReferencePath {
 public:
  ReferencePath() = default;
  explicit ReferencePath(std::vector<PathSegment> segments);

  double length() const { return total_; }
  Eigen::Vector2d position(double s) const;
  double heading(double s) const;

  struct Projection {
    double s = 0.0;
    double distance = 0.0;
    Eigen::Vector2d gradient{0.0, 0.0};  // d(distance)/d(point); unit or zero
  };
  Projection project(const Eigen::Vector2d& point) const;

  /// Arc length of the finish line along this path (set by the builder).
  double finish_s = 0.0;

  const std::vector<PathSegment>& segments() const { return segments_; }

 private:
  std::vector<PathSegment> segments_;
  std::vector<double> cumulative_;  // start arc length per segment
  double total_ = 0.0;
};

enum class Arm { kSouth, kWest, kNorth, kEast };
enum class Maneuver { kLeft, kForward, kRight };

/// Single-lane four-arm intersection under right-hand traffic.
struct IntersectionGeometry {
  double half_width = 9.0;        // intersection box half-extent (m)
  double lane_offset = 1.75;      // lane-center offset from the arm axis (m)
  double spawn_distance = 30.0;   // spawn position before the center (m)
  double finish_distance = 15.0;  // finish line past the center (m)
  double tail = 25.0;             // extra path beyond the finish line (m)
};

/// Reference path for a vehicle entering from `arm` and performing
/// `maneuver`: straight approach, a circular arc through the box for
/// turns, straight exit. finish_s marks the finish line.
ReferencePath make_intersection_path(Arm arm, Maneuver maneuver,
                                     const IntersectionGeometry& geometry);

/// Straight path through the origin from a spawn point (4-robot crossing).
ReferencePath make_line_path(const Eigen::Vector2d& start,
                             const Eigen::Vector2d& direction, double length,
                             double finish_s);

double arm_angle(Arm arm);  // heading of travel into the intersection

}  // namespace oadmm::sim
