#pragma once

// Stroke integration of the driftless swimmer dynamics.

#include <iosfwd>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "wallstokes/swimmer.hpp"

namespace wallstokes {

struct StrokeKnot {
  double t = 0.0;
  Eigen::VectorXd xi;
};

/// Piecewise-linear shape path through time-ordered knots.
class Stroke {
 public:
  Stroke() = default;
  /// Throws DomainError unless times strictly increase, start at 0 and all
  /// shapes have the same dimension.
  explicit Stroke(std::vector<StrokeKnot> knots);

  /// Constant shape over [0, duration].
  static Stroke hold(const Eigen::VectorXd& xi, double duration);
  /// Piecewise-linear path through `shapes` with segment duration `dt_segment`.
  static Stroke through(const std::vector<Eigen::VectorXd>& shapes, double dt_segment);

  const std::vector<StrokeKnot>& knots() const { return knots_; }
  bool empty() const { return knots_.empty(); }
  double duration() const { return knots_.empty() ? 0.0 : knots_.back().t; }
  Eigen::Index dim() const { return knots_.empty() ? 0 : knots_.front().xi.size(); }
  Eigen::VectorXd start() const { return knots_.front().xi; }
  Eigen::VectorXd end() const { return knots_.back().xi; }

  Eigen::VectorXd shape(double t) const;
  /// The same path traversed backwards over the same duration.
  Stroke reversed() const;
  /// Appends `next`, shifted in time. Its first shape must equal end().
  Stroke then(const Stroke& next) const;
  /// Same path with all times multiplied by `factor`.
  Stroke time_scaled(double factor) const;

 private:
  std::vector<StrokeKnot> knots_;
};

enum class SwimmerKind { three_sphere, four_sphere };

/// Sampled state path. Three-sphere rows are (xi1, xi2, x, y, theta) with
/// theta unwrapped; four-sphere rows are (xi1..xi4, cx, cy, cz, qw, qx, qy, qz).
struct Trajectory {
  SwimmerKind kind = SwimmerKind::three_sphere;
  std::vector<double> t;
  std::vector<Eigen::VectorXd> states;
  long steps = 0;
  long field_evaluations = 0;
  double max_quaternion_drift = 0.0;  ///< largest | |q| - 1 | before renormalization

  bool empty() const { return states.empty(); }
};

struct IntegrateOptions {
  double dt = 0.0;  ///< target step; <= 0 means duration / 4096
  FieldOptions fields;
};

namespace sim {

inline constexpr int kDefaultStepsPerStroke = 4096;

/// RK4 on the pose with the shape taken from the stroke at every stage.
/// Each linear stroke segment is split into equal steps no longer than dt.
/// Throws AdmissibilityError when a step leaves the admissible set.
Trajectory integrate(const ThreeSphereState& state0, const Stroke& stroke,
                     const SwimmerParams& params, bool wall, const IntegrateOptions& opts = {});
Trajectory integrate(const FourSphereState& state0, const Stroke& stroke,
                     const SwimmerParams& params, bool wall, const IntegrateOptions& opts = {});

/// Final pose minus initial pose. Three-sphere: (dx, dy, dtheta) with dtheta
/// wrapped to (-pi, pi]. Four-sphere: (dc, rotation vector of q0^-1 q1).
Eigen::VectorXd net_displacement(const Trajectory& traj);

ThreeSphereState three_sphere_state(const Trajectory& traj, std::size_t i);
FourSphereState four_sphere_state(const Trajectory& traj, std::size_t i);

std::vector<std::string> validate_state(const ThreeSphereState& state, const SwimmerParams& params);
std::vector<std::string> validate_state(const FourSphereState& state, const SwimmerParams& params);

/// Wraps an angle to [0, 2 pi).
double wrap_angle(double theta);
/// Wraps an angle to (-pi, pi].
double wrap_delta(double theta);

/// CSV with header t,xi1,xi2,x,y,theta or t,xi1..xi4,cx,cy,cz,qw,qx,qy,qz,
/// theta wrapped to [0, 2 pi).
void write_csv(const Trajectory& traj, std::ostream& out);

}  // namespace sim
}  // namespace wallstokes
