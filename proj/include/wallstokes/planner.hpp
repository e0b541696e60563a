#pragma once

// Local motion planning for the three-sphere swimmer: square shape loops
// whose holonomy is steered by damped least-squares shooting.

#include <iosfwd>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "wallstokes/sim.hpp"
#include "wallstokes/swimmer.hpp"

namespace wallstokes {

struct PlanPrimitive {
  enum class Kind { loop, transit, shape_move };
  Kind kind = Kind::loop;
  int leg = 0;
  Eigen::Vector2d from = Eigen::Vector2d::Zero();  ///< shape at the start
  Eigen::Vector2d to = Eigen::Vector2d::Zero();    ///< shape at the end
  double area = 0.0;   ///< signed total enclosed area (loops)
  double side = 0.0;   ///< signed side of each square (loops)
  int repeats = 0;     ///< number of squares (loops)
  double t_start = 0.0;
  double t_end = 0.0;
  std::vector<double> knot_times;
};

struct Plan {
  ThreeSphereState start;
  ThreeSphereState target;
  std::vector<PlanPrimitive> primitives;
  Stroke stroke;
  ThreeSphereState predicted;
  double error = 0.0;
  int iterations = 0;   ///< forward simulations spent on trial steps
  int legs = 0;
  int refinements = 0;  ///< loop-count increases, each re-evaluating the plan
  bool converged = false;
  std::vector<double> error_history;  ///< after each accepted step or refinement
};

struct PlannerOptions {
  int budget = 50;                 ///< shooting iterations over all legs
  double tol = 1e-4;               ///< on |final - target| (theta wrapped)
  double loop_cap_fraction = 0.2;  ///< loop side cap relative to the smaller arm
  double offset_fraction = 0.5;    ///< shape offset of the second-order loops
  double trust_radius = 5e-3;      ///< pose distance per waypoint leg
  int steps_per_side = 8;          ///< RK4 steps per stroke segment (unit time each)
  int depth = 3;
  double rank_tol = 1e-6;
  bool wall = true;
};

namespace planner {

/// Closed square loop starting and ending at the center shape. A positive
/// amplitude walks +e_i, +e_j, -e_i, -e_j with side `amplitude` (holonomy
/// ~ amplitude^2 [F_i, F_j]); a negative one reverses the orientation. Each
/// side takes |amplitude| time units. Zero amplitude gives a one-knot stroke.
/// Throws AdmissibilityError if a corner of the loop is inadmissible.
Stroke bracket_loop(const ThreeSphereState& center, int i, int j, double amplitude,
                    const SwimmerParams& params);

/// Steers state0 to target. Throws NotLocallyControllableError when the Lie
/// algebra rank at state0 is below 5. A plan that misses tol within the
/// budget is returned with converged = false.
Plan plan_local(const ThreeSphereState& state0, const ThreeSphereState& target,
                const SwimmerParams& params, const PlannerOptions& options = {});

/// |a - b| over (xi1, xi2, x, y, theta) with the theta difference wrapped.
double state_distance(const ThreeSphereState& a, const ThreeSphereState& b);

void write_plan_json(const Plan& plan, std::ostream& out);

}  // namespace planner
}  // namespace wallstokes
