#include "wallstokes/greens.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include "wallstokes/errors.hpp"

namespace wallstokes::greens {
namespace {

void check_fluid(const FluidParams& fluid) {
  if (!(fluid.mu > 0.0) || !std::isfinite(fluid.mu)) {
    throw DomainError("viscosity must be positive, got " + std::to_string(fluid.mu));
  }
}

void check_source(const Vec3& r0) {
  if (!(r0[kNormal] > 0.0)) {
    throw DomainError("source point must lie strictly above the wall (y0 = " +
                      std::to_string(r0[kNormal]) + ")");
  }
}

double delta(int i, int j) { return i == j ? 1.0 : 0.0; }

}  // namespace

Tensor3 stokeslet(const Vec3& r, const FluidParams& fluid) {
  check_fluid(fluid);
  const double n = r.norm();
  if (n < kSingularRadius) {
    throw SingularityError("Stokeslet evaluated at its source");
  }
  const double n3 = n * n * n;
  return (Tensor3::Identity() / n + r * r.transpose() / n3) /
         (8.0 * std::numbers::pi * fluid.mu);
}

Tensor3 image_tensor(const Vec3& r, const Vec3& r0, const FluidParams& fluid) {
  check_fluid(fluid);
  check_source(r0);
  if (r[kNormal] < 0.0) {
    throw DomainError("evaluation point below the wall");
  }
  const double h = r0[kNormal];
  Vec3 image = r0;
  image[kNormal] = -h;
  const Vec3 rp = r - image;
  const double n = rp.norm();
  const double n3 = n * n * n;
  const double n5 = n3 * n * n;
  const double pi = std::numbers::pi;

  // Reflected Stokeslet.
  Tensor3 k = -(Tensor3::Identity() / n + rp * rp.transpose() / n3) / (8.0 * pi * fluid.mu);

  // Potential doublet and Stokeslet doublet. Both carry the mirror sign
  // (1 - 2 delta_{j,normal}) on the source index.
  const double c2 = h * h / (4.0 * pi * fluid.mu);
  const double c3 = -h / (4.0 * pi * fluid.mu);
  const double rn = rp[kNormal];
  for (int i = 0; i < 3; ++i) {
    for (int j = 0; j < 3; ++j) {
      const double mirror = 1.0 - 2.0 * delta(j, kNormal);
      const double doublet = delta(i, j) / n3 - 3.0 * rp[i] * rp[j] / n5;
      const double stokes_doublet = rn * delta(i, j) / n3 - rp[j] * delta(i, kNormal) / n3 +
                                    rp[i] * delta(j, kNormal) / n3 -
                                    3.0 * rp[i] * rp[j] * rn / n5;
      k(i, j) += mirror * (c2 * doublet + c3 * stokes_doublet);
    }
  }
  return k;
}

Tensor3 blake_tensor(const Vec3& r, const Vec3& r0, const FluidParams& fluid) {
  check_source(r0);
  if ((r - r0).norm() < kSingularRadius) {
    throw SingularityError("wall Green tensor evaluated at its source");
  }
  return stokeslet(r - r0, fluid) + image_tensor(r, r0, fluid);
}

Tensor3 self_image(const Vec3& r0, const FluidParams& fluid) {
  return image_tensor(r0, r0, fluid);
}

Vec3 point_force_velocity(std::span<const PointForce> sources, const Vec3& eval,
                          const FluidParams& fluid) {
  Vec3 u = Vec3::Zero();
  for (const auto& s : sources) {
    u += blake_tensor(eval, s.position, fluid) * s.force;
  }
  return u;
}

}  // namespace wallstokes::greens
