#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>

#include "oadmm/sim/path.hpp"

namespace oadmm::sim {

namespace {
constexpr double kPi = std::numbers::pi;
}

Eigen::Vector2d PathSegment::position(double s) const {
  if (type == Type::kLine) return anchor + s * dir;
  const double angle = angle0 + (sweep >= 0.0 ? s / radius : -s / radius);
  return anchor + radius * Eigen::Vector2d(std::cos(angle), std::sin(angle));
}

double PathSegment::heading(double s) const {
  if (type == Type::kLine) return std::atan2(dir.y(), dir.x());
  const double angle = angle0 + (sweep >= 0.0 ? s / radius : -s / radius);
  return sweep >= 0.0 ? angle + kPi / 2.0 : angle - kPi / 2.0;
}

ReferencePath::ReferencePath(std::vector<PathSegment> segments)
    : segments_(std::move(segments)) {
  cumulative_.reserve(segments_.size());
  total_ = 0.0;
  for (const PathSegment& segment : segments_) {
    cumulative_.push_back(total_);
    total_ += segment.length;
  }
}

Eigen::Vector2d ReferencePath::position(double s) const {
  s = std::clamp(s, 0.0, total_);
  for (size_t i = segments_.size(); i-- > 0;) {
    if (s >= cumulative_[i] || i == 0) {
      return segments_[i].position(s - cumulative_[i]);
    }
  }
  return segments_.front().position(0.0);
}

double ReferencePath::heading(double s) const {
  s = std::clamp(s, 0.0, total_);
  for (size_t i = segments_.size(); i-- > 0;) {
    if (s >= cumulative_[i] || i == 0) {
      return segments_[i].heading(s - cumulative_[i]);
    }
  }
  return segments_.front().heading(0.0);
}

ReferencePath::Projection ReferencePath::project(
    const Eigen::Vector2d& point) const {
  Projection best;
  best.distance = std::numeric_limits<double>::infinity();
  for (size_t i = 0; i < segments_.size(); ++i) {
    const PathSegment& segment = segments_[i];
    double local_s;
    if (segment.type == PathSegment::Type::kLine) {
      local_s = std::clamp((point - segment.anchor).dot(segment.dir), 0.0,
                           segment.length);
    } else {
      const Eigen::Vector2d rel = point - segment.anchor;
      double delta = std::atan2(rel.y(), rel.x()) - segment.angle0;
      delta = std::remainder(delta, 2.0 * kPi);
      const double span = std::abs(segment.sweep);
      double along = segment.sweep >= 0.0 ? delta : -delta;
      if (along < 0.0 || along > span) {
        // outside the arc range: nearer endpoint wins
        const double d0 = (point - segment.position(0.0)).norm();
        const double d1 = (point - segment.position(segment.length)).norm();
        along = d0 <= d1 ? 0.0 : span;
      }
      local_s = along * segment.radius;
    }
    const Eigen::Vector2d candidate = segment.position(local_s);
    const double distance = (point - candidate).norm();
    if (distance < best.distance) {
      best.distance = distance;
      best.s = cumulative_[i] + local_s;
      best.gradient = distance > 1e-12
                          ? Eigen::Vector2d((point - candidate) / distance)
                          : Eigen::Vector2d(0.0, 0.0);
    }
  }
  return best;
}

double arm_angle(Arm arm) {
  switch (arm) {
    case Arm::kSouth: return kPi / 2.0;   // traveling north
    case Arm::kWest: return 0.0;          // traveling east
    case Arm::kNorth: return -kPi / 2.0;  // traveling south
    case Arm::kEast: return kPi;          // traveling west
  }
  return 0.0;
}

namespace {

Eigen::Vector2d rotate(const Eigen::Vector2d& v, double angle) {
  const double c = std::cos(angle), s = std::sin(angle);
  return {c * v.x() - s * v.y(), s * v.x() + c * v.y()};
}

}  // namespace

ReferencePath make_intersection_path(Arm arm, Maneuver maneuver,
                                     const IntersectionGeometry& geometry) {
  // Build in the south-entry frame (traveling north on lane x = +offset),
  // then rotate into the requested arm.
  const double h = geometry.half_width;
  const double off = geometry.lane_offset;
  const double approach = geometry.spawn_distance - h;
  if (approach <= 0.0) {
    throw std::invalid_argument("make_intersection_path: spawn inside box");
  }
  const double rotation = arm_angle(arm) - kPi / 2.0;

  std::vector<PathSegment> segments;
  PathSegment entry;
  entry.type = PathSegment::Type::kLine;
  entry.anchor = {off, -geometry.spawn_distance};
  entry.dir = {0.0, 1.0};
  entry.length = approach;
  segments.push_back(entry);

  double through_length = 0.0;  // box entry to box exit along the path
  if (maneuver == Maneuver::kForward) {
    PathSegment line;
    line.type = PathSegment::Type::kLine;
    line.anchor = {off, -h};
    line.dir = {0.0, 1.0};
    line.length = 2.0 * h + (geometry.finish_distance - h) + geometry.tail;
    segments.push_back(line);
    through_length = 2.0 * h;
  } else if (maneuver == Maneuver::kLeft) {
    const double radius = h + off;
    PathSegment turn;
    turn.type = PathSegment::Type::kArc;
    turn.anchor = {off - radius, -h};
    turn.radius = radius;
    turn.angle0 = 0.0;
    turn.sweep = kPi / 2.0;
    turn.length = radius * kPi / 2.0;
    segments.push_back(turn);
    PathSegment exit;
    exit.type = PathSegment::Type::kLine;
    exit.anchor = {-h, off};
    exit.dir = {-1.0, 0.0};
    exit.length = (geometry.finish_distance - h) + geometry.tail;
    segments.push_back(exit);
    through_length = turn.length;
  } else {
    const double radius = h - off;
    PathSegment turn;
    turn.type = PathSegment::Type::kArc;
    turn.anchor = {off + radius, -h};
    turn.radius = radius;
    turn.angle0 = kPi;
    turn.sweep = -kPi / 2.0;
    turn.length = radius * kPi / 2.0;
    segments.push_back(turn);
    PathSegment exit;
    exit.type = PathSegment::Type::kLine;
    exit.anchor = {h, -off};
    exit.dir = {1.0, 0.0};
    exit.length = (geometry.finish_distance - h) + geometry.tail;
    segments.push_back(exit);
    through_length = turn.length;
  }

  if (std::abs(rotation) > 1e-12) {
    for (PathSegment& segment : segments) {
      segment.anchor = rotate(segment.anchor, rotation);
      segment.dir = rotate(segment.dir, rotation);
      segment.angle0 += rotation;
    }
  }

  ReferencePath path(std::move(segments));
  path.finish_s = approach + through_length + (geometry.finish_distance - h);
  return path;
}

ReferencePath make_line_path(const Eigen::Vector2d& start,
                             const Eigen::Vector2d& direction, double length,
                             double finish_s) {
  PathSegment line;
  line.type = PathSegment::Type::kLine;
  line.anchor = start;
  line.dir = direction.normalized();
  line.length = length;
  ReferencePath path({line});
  path.finish_s = finish_s;
  return path;
}

}  // namespace oadmm::sim
