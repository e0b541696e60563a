#pragma once

// Green tensors for Stokes flow in the half-space y > 0 bounded by a no-slip
// wall at y = 0.

#include <span>

#include <Eigen/Core>

namespace wallstokes {

using Vec3 = Eigen::Vector3d;
using Tensor3 = Eigen::Matrix3d;

/// Index of the wall-normal coordinate.
inline constexpr int kNormal = 1;

/// Evaluation closer than this to a source point is a singularity error.
inline constexpr double kSingularRadius = 1e-12;

struct FluidParams {
  double mu = 1.0;  ///< dynamic viscosity, > 0
};

/// A point force `force` applied at `position`.
struct PointForce {
  Vec3 position;
  Vec3 force;
};

namespace greens {

/// Free-space Stokeslet G(r) = (Id/|r| + r r^T/|r|^3) / (8 pi mu).
Tensor3 stokeslet(const Vec3& r, const FluidParams& fluid = {});

/// Image part K1 + K2 + K3 of the Blake tensor for a source at r0 (r0.y > 0)
/// evaluated at r. Regular everywhere in the closed half-space, including at
/// r = r0.
Tensor3 image_tensor(const Vec3& r, const Vec3& r0, const FluidParams& fluid = {});

/// Full wall Green tensor K(r, r0) = G(r - r0) + K1 + K2 + K3. The velocity
/// K(r, r0) f vanishes on the plane y = 0.
Tensor3 blake_tensor(const Vec3& r, const Vec3& r0, const FluidParams& fluid = {});

/// Image tensor evaluated at its own source, K1 + K2 + K3 (r0, r0).
Tensor3 self_image(const Vec3& r0, const FluidParams& fluid = {});

/// Velocity at `eval` induced by a set of point forces through K.
Vec3 point_force_velocity(std::span<const PointForce> sources, const Vec3& eval,
                          const FluidParams& fluid = {});

}  // namespace greens
}  // namespace wallstokes
