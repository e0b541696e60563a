#pragma once

// Sphere-assembly swimmers: geometry, the point-force resistance assembly and
// the control vector fields obtained from the self-propulsion constraint.

#include <array>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Core>
#include <Eigen/Geometry>

#include "wallstokes/greens.hpp"

namespace wallstokes {

using Vector5d = Eigen::Matrix<double, 5, 1>;
using Vector10d = Eigen::Matrix<double, 10, 1>;

struct SwimmerParams {
  double a = 0.01;  ///< sphere radius
  FluidParams fluid;
};

/// Planar three-sphere swimmer. (x, y) is the center sphere, theta the angle
/// between the swimmer axis and the x-axis. Stored unwrapped.
struct ThreeSphereState {
  double xi1 = 1.0;
  double xi2 = 1.0;
  double x = 0.0;
  double y = 1.0;
  double theta = 0.0;

  Vector5d vector() const { return {xi1, xi2, x, y, theta}; }
  static ThreeSphereState from_vector(const Vector5d& v) { return {v[0], v[1], v[2], v[3], v[4]}; }
};

/// Tetrahedral four-sphere swimmer. Sphere i sits at c + xi[i] * orient * t_i.
struct FourSphereState {
  std::array<double, 4> xi{1.0, 1.0, 1.0, 1.0};
  Vec3 c{0.0, 10.0, 0.0};
  Eigen::Quaterniond orient = Eigen::Quaterniond::Identity();
};

/// Leading-order resistance data for one configuration. Rows of S are total
/// force (3) then total torque about the swimmer center (3); T maps the pose
/// rate and U the shape rate to sphere-center velocities.
struct ResistanceAssembly {
  Eigen::MatrixXd A;
  Eigen::MatrixXd S;
  Eigen::MatrixXd T;
  Eigen::MatrixXd U;
  std::vector<Vec3> positions;
};

struct FieldOptions {
  /// Adds the (8 pi / 3) mu a^3 rotation torque of the center sphere to the
  /// planar torque balance (three-sphere only). Off by default.
  bool rotlet = false;
  /// Torque reference point relative to the swimmer center.
  Vec3 torque_offset = Vec3::Zero();
};

namespace swimmer {

/// Relative margin applied to every strict geometric inequality.
inline constexpr double kGuardMargin = 1e-9;

/// Unit arm directions of the regular tetrahedron.
const std::array<Vec3, 4>& tetrahedron_directions();

std::array<Vec3, 3> three_sphere_positions(const ThreeSphereState& state);
std::array<Vec3, 4> four_sphere_positions(const FourSphereState& state);

/// Human-readable list of admissibility violations; empty when admissible.
std::vector<std::string> violations(const ThreeSphereState& state, const SwimmerParams& params);
std::vector<std::string> violations(const FourSphereState& state, const SwimmerParams& params);

/// Throws ConfigurationError listing every violation.
void require_admissible(const ThreeSphereState& state, const SwimmerParams& params);
void require_admissible(const FourSphereState& state, const SwimmerParams& params);

/// The a-independent interaction block matrix A1 with A = Id + a A1:
/// A1_ii = -6 pi mu sum_l K_l(x_i, x_i) (wall only), A1_ij = -6 pi mu K(x_i, x_j)
/// or the Stokeslet in free space. It does not depend on mu.
Eigen::MatrixXd interaction_matrix(std::span<const Vec3> positions, const FluidParams& fluid,
                                   bool wall);

/// Grand matrix A for spheres of radius params.a. Throws ConfigurationError
/// when two spheres overlap or (wall mode) a center is not above the wall.
Eigen::MatrixXd assemble(std::span<const Vec3> positions, const SwimmerParams& params, bool wall);

ResistanceAssembly three_sphere_assembly(const ThreeSphereState& state,
                                         const SwimmerParams& params, bool wall);

/// Pose rate is (c_dot, omega_body).
ResistanceAssembly four_sphere_assembly(const FourSphereState& state, const SwimmerParams& params,
                                        bool wall, const Vec3& torque_offset = Vec3::Zero());

/// F1, F2 of the planar three-sphere swimmer in (xi1, xi2, x, y, theta).
std::array<Vector5d, 2> three_sphere_fields(const ThreeSphereState& state,
                                            const SwimmerParams& params, bool wall,
                                            const FieldOptions& options = {});

/// Expansion F = leading + a * first_order of the three-sphere fields about
/// a = 0 (exact first-order perturbation of the balance system).
struct FieldExpansion {
  std::array<Vector5d, 2> leading;
  std::array<Vector5d, 2> first_order;
};
FieldExpansion three_sphere_field_expansion(const ThreeSphereState& state, bool wall);

/// F1..F4 of the four-sphere swimmer in (xi1..xi4, c_dot, omega_body).
std::array<Vector10d, 4> four_sphere_fields(const FourSphereState& state,
                                            const SwimmerParams& params, bool wall,
                                            const FieldOptions& options = {});

/// Sphere forces f_i = 6 pi mu a (A u)_i for sphere velocities u.
std::vector<Vec3> sphere_forces(const ResistanceAssembly& assembly, const Eigen::VectorXd& u,
                                const SwimmerParams& params);

}  // namespace swimmer
}  // namespace wallstokes
