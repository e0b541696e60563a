#include "wallstokes/swimmer.hpp"

#include <cmath>
#include <numbers>
#include <sstream>

#include <Eigen/Dense>

#include "wallstokes/errors.hpp"

namespace wallstokes::swimmer {
namespace {

constexpr double kPi = std::numbers::pi;
// Reciprocal condition number below which a balance system counts as singular.
constexpr double kSingularRcond = 1e-13;
constexpr double kResidualTol = 1e-10;

Eigen::Matrix3d skew(const Vec3& v) {
  Eigen::Matrix3d m;
  m << 0.0, -v.z(), v.y(), v.z(), 0.0, -v.x(), -v.y(), v.x(), 0.0;
  return m;
}

std::string fmt(double v) {
  std::ostringstream os;
  os.precision(17);
  os << v;
  return os.str();
}

void check_params(const SwimmerParams& params) {
  if (!(params.a > 0.0) || !std::isfinite(params.a)) {
    throw ConfigurationError("sphere radius must be positive, got " + fmt(params.a));
  }
}

template <std::size_t N>
void append_common_violations(const std::array<Vec3, N>& pos, const SwimmerParams& params,
                              std::vector<std::string>& out) {
  const double a = params.a;
  for (std::size_t i = 0; i < N; ++i) {
    if (!pos[i].allFinite()) {
      out.push_back("sphere " + std::to_string(i + 1) + " has a non-finite center");
      continue;
    }
    if (!(pos[i][kNormal] > a * (1.0 + kGuardMargin))) {
      out.push_back("sphere " + std::to_string(i + 1) + " wall clearance: center height " +
                    fmt(pos[i][kNormal]) + " <= radius " + fmt(a));
    }
  }
  for (std::size_t i = 0; i < N; ++i) {
    for (std::size_t j = i + 1; j < N; ++j) {
      const double d = (pos[i] - pos[j]).norm();
      if (!(d > 2.0 * a * (1.0 + kGuardMargin))) {
        out.push_back("spheres " + std::to_string(i + 1) + " and " + std::to_string(j + 1) +
                      " overlap: distance " + fmt(d) + " <= " + fmt(2.0 * a));
      }
    }
  }
}

void throw_if_any(const std::vector<std::string>& v) {
  if (v.empty()) return;
  std::string msg = "inadmissible state:";
  for (const auto& s : v) msg += "\n  " + s;
  throw ConfigurationError(msg);
}

// Solves M p = rhs after a conditioning check.
Eigen::VectorXd solve_balance(const Eigen::MatrixXd& m, const Eigen::VectorXd& rhs) {
  Eigen::PartialPivLU<Eigen::MatrixXd> lu(m);
  if (!(lu.rcond() > kSingularRcond)) {
    throw DegenerateConfigurationError("self-propulsion balance matrix is singular (rcond = " +
                                       fmt(lu.rcond()) + ")");
  }
  return lu.solve(rhs);
}

// Planar balance rows: force x, force y, torque z.
constexpr std::array<int, 3> kPlanarRows{0, 1, 5};
constexpr std::array<int, 3> kOutOfPlaneRows{2, 3, 4};

Eigen::MatrixXd rows(const Eigen::MatrixXd& m, const std::array<int, 3>& idx) {
  Eigen::MatrixXd out(3, m.cols());
  for (int k = 0; k < 3; ++k) out.row(k) = m.row(idx[k]);
  return out;
}

Eigen::MatrixXd balance_matrix(std::span<const Vec3> positions, const Vec3& ref) {
  const auto n = static_cast<Eigen::Index>(positions.size());
  Eigen::MatrixXd s = Eigen::MatrixXd::Zero(6, 3 * n);
  for (Eigen::Index i = 0; i < n; ++i) {
    s.block<3, 3>(0, 3 * i).setIdentity();
    s.block<3, 3>(3, 3 * i) = skew(positions[i] - ref);
  }
  return s;
}

struct ThreeSphereKinematics {
  std::array<Vec3, 3> positions;
  Eigen::MatrixXd T;  // 9 x 3
  Eigen::MatrixXd U;  // 9 x 2
};

ThreeSphereKinematics three_sphere_kinematics(const ThreeSphereState& s) {
  ThreeSphereKinematics k;
  k.positions = three_sphere_positions(s);
  const Vec3 e(std::cos(s.theta), std::sin(s.theta), 0.0);
  const Vec3 e_perp(-std::sin(s.theta), std::cos(s.theta), 0.0);
  k.T = Eigen::MatrixXd::Zero(9, 3);
  k.U = Eigen::MatrixXd::Zero(9, 2);
  for (int i = 0; i < 3; ++i) {
    k.T(3 * i, 0) = 1.0;
    k.T(3 * i + 1, 1) = 1.0;
  }
  k.T.block<3, 1>(0, 2) = -s.xi1 * e_perp;
  k.T.block<3, 1>(6, 2) = s.xi2 * e_perp;
  k.U.block<3, 1>(0, 0) = -e;
  k.U.block<3, 1>(6, 1) = e;
  return k;
}

}  // namespace

const std::array<Vec3, 4>& tetrahedron_directions() {
  static const std::array<Vec3, 4> t = [] {
    const double s = 1.0 / std::sqrt(3.0);
    return std::array<Vec3, 4>{Vec3(s, s, s), Vec3(s, -s, -s), Vec3(-s, s, -s),
                               Vec3(-s, -s, s)};
  }();
  return t;
}

std::array<Vec3, 3> three_sphere_positions(const ThreeSphereState& s) {
  const Vec3 c(s.x, s.y, 0.0);
  const Vec3 e(std::cos(s.theta), std::sin(s.theta), 0.0);
  return {c - s.xi1 * e, c, c + s.xi2 * e};
}

std::array<Vec3, 4> four_sphere_positions(const FourSphereState& s) {
  const Eigen::Matrix3d r = s.orient.normalized().toRotationMatrix();
  const auto& t = tetrahedron_directions();
  std::array<Vec3, 4> out;
  for (int i = 0; i < 4; ++i) out[i] = s.c + s.xi[i] * (r * t[i]);
  return out;
}

std::vector<std::string> violations(const ThreeSphereState& s, const SwimmerParams& params) {
  std::vector<std::string> out;
  const double a = params.a;
  if (!(a > 0.0)) {
    out.push_back("sphere radius must be positive");
    return out;
  }
  const double arm_min = 2.0 * a * (1.0 + kGuardMargin);
  if (!(s.xi1 > arm_min)) out.push_back("arm xi1 = " + fmt(s.xi1) + " <= 2a = " + fmt(2.0 * a));
  if (!(s.xi2 > arm_min)) out.push_back("arm xi2 = " + fmt(s.xi2) + " <= 2a = " + fmt(2.0 * a));
  if (!(s.y > 0.0)) out.push_back("center height y = " + fmt(s.y) + " <= 0");
  if (!std::isfinite(s.x) || !std::isfinite(s.theta)) out.push_back("non-finite pose");
  if (out.empty()) append_common_violations(three_sphere_positions(s), params, out);
  return out;
}

std::vector<std::string> violations(const FourSphereState& s, const SwimmerParams& params) {
  std::vector<std::string> out;
  const double a = params.a;
  if (!(a > 0.0)) {
    out.push_back("sphere radius must be positive");
    return out;
  }
  const double arm_min = std::sqrt(1.5) * a * (1.0 + kGuardMargin);
  for (int i = 0; i < 4; ++i) {
    if (!(s.xi[i] > arm_min)) {
      out.push_back("arm xi" + std::to_string(i + 1) + " = " + fmt(s.xi[i]) +
                    " <= sqrt(3/2) a = " + fmt(std::sqrt(1.5) * a));
    }
  }
  if (!(s.c[kNormal] > 0.0)) out.push_back("center height " + fmt(s.c[kNormal]) + " <= 0");
  if (std::abs(s.orient.norm() - 1.0) > 1e-10) {
    out.push_back("orientation quaternion norm " + fmt(s.orient.norm()) + " differs from 1");
  }
  if (out.empty()) append_common_violations(four_sphere_positions(s), params, out);
  return out;
}

void require_admissible(const ThreeSphereState& s, const SwimmerParams& p) {
  check_params(p);
  throw_if_any(violations(s, p));
}

void require_admissible(const FourSphereState& s, const SwimmerParams& p) {
  check_params(p);
  throw_if_any(violations(s, p));
}

Eigen::MatrixXd interaction_matrix(std::span<const Vec3> positions, const FluidParams& fluid,
                                   bool wall) {
  const auto n = static_cast<Eigen::Index>(positions.size());
  Eigen::MatrixXd a1 = Eigen::MatrixXd::Zero(3 * n, 3 * n);
  const double scale = -6.0 * kPi * fluid.mu;
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = 0; j < n; ++j) {
      Tensor3 k;
      if (i == j) {
        if (!wall) continue;
        k = greens::self_image(positions[i], fluid);
      } else {
        k = wall ? greens::blake_tensor(positions[i], positions[j], fluid)
                 : greens::stokeslet(positions[i] - positions[j], fluid);
      }
      a1.block<3, 3>(3 * i, 3 * j) = scale * k;
    }
  }
  return a1;
}

Eigen::MatrixXd assemble(std::span<const Vec3> positions, const SwimmerParams& params, bool wall) {
  check_params(params);
  const double a = params.a;
  for (std::size_t i = 0; i < positions.size(); ++i) {
    if (wall && !(positions[i][kNormal] > 0.0)) {
      throw ConfigurationError("sphere " + std::to_string(i + 1) + " is not above the wall");
    }
    for (std::size_t j = i + 1; j < positions.size(); ++j) {
      if ((positions[i] - positions[j]).norm() < 2.0 * a) {
        throw ConfigurationError("spheres " + std::to_string(i + 1) + " and " +
                                 std::to_string(j + 1) + " overlap");
      }
    }
  }
  const auto n = static_cast<Eigen::Index>(3 * positions.size());
  return Eigen::MatrixXd::Identity(n, n) + a * interaction_matrix(positions, params.fluid, wall);
}

ResistanceAssembly three_sphere_assembly(const ThreeSphereState& state,
                                         const SwimmerParams& params, bool wall) {
  require_admissible(state, params);
  auto kin = three_sphere_kinematics(state);
  ResistanceAssembly out;
  out.positions.assign(kin.positions.begin(), kin.positions.end());
  out.A = assemble(kin.positions, params, wall);
  out.S = balance_matrix(kin.positions, kin.positions[1]);
  out.T = std::move(kin.T);
  out.U = std::move(kin.U);
  return out;
}

ResistanceAssembly four_sphere_assembly(const FourSphereState& state, const SwimmerParams& params,
                                        bool wall, const Vec3& torque_offset) {
  require_admissible(state, params);
  const auto pos = four_sphere_positions(state);
  const Eigen::Matrix3d rot = state.orient.normalized().toRotationMatrix();
  const auto& t = tetrahedron_directions();
  ResistanceAssembly out;
  out.positions.assign(pos.begin(), pos.end());
  out.A = assemble(pos, params, wall);
  out.S = balance_matrix(pos, state.c + torque_offset);
  out.T = Eigen::MatrixXd::Zero(12, 6);
  out.U = Eigen::MatrixXd::Zero(12, 4);
  for (int i = 0; i < 4; ++i) {
    // u_i = c_dot + (R w_body) x (x_i - c) + xi_dot_i R t_i
    out.T.block<3, 3>(3 * i, 0).setIdentity();
    out.T.block<3, 3>(3 * i, 3) = -skew(pos[i] - state.c) * rot;
    out.U.block<3, 1>(3 * i, i) = rot * t[i];
  }
  return out;
}

std::array<Vector5d, 2> three_sphere_fields(const ThreeSphereState& state,
                                            const SwimmerParams& params, bool wall,
                                            const FieldOptions& options) {
  require_admissible(state, params);
  auto kin = three_sphere_kinematics(state);
  const Eigen::MatrixXd a_mat = assemble(kin.positions, params, wall);
  const Vec3 ref = kin.positions[1] + options.torque_offset;
  const Eigen::MatrixXd sa = balance_matrix(kin.positions, ref) * a_mat;
  const Eigen::MatrixXd sat = sa * kin.T;
  const Eigen::MatrixXd sau = sa * kin.U;

  Eigen::MatrixXd m = rows(sat, kPlanarRows);
  if (options.rotlet) {
    // Torque of the rotating center sphere, (8 pi / 3) mu a^3 theta_dot, in the
    // velocity units of S A (forces divided by 6 pi mu a).
    m(2, 2) += (4.0 / 9.0) * params.a * params.a;
  }
  const Eigen::MatrixXd b = rows(sau, kPlanarRows);

  std::array<Vector5d, 2> out;
  for (int k = 0; k < 2; ++k) {
    const Eigen::VectorXd p = solve_balance(m, -b.col(k));
    const Eigen::VectorXd resid = rows(sat, kOutOfPlaneRows) * p + rows(sau, kOutOfPlaneRows).col(k);
    const double scale = 1.0 + sau.col(k).norm() + sat.norm() * p.norm();
    if (resid.norm() > kResidualTol * scale) {
      throw ConsistencyError("out-of-plane balance residual " + fmt(resid.norm()));
    }
    out[k] << (k == 0 ? 1.0 : 0.0), (k == 1 ? 1.0 : 0.0), p[0], p[1], p[2];
  }
  return out;
}

FieldExpansion three_sphere_field_expansion(const ThreeSphereState& state, bool wall) {
  auto kin = three_sphere_kinematics(state);
  const Eigen::MatrixXd a1 = interaction_matrix(kin.positions, FluidParams{}, wall);
  const Eigen::MatrixXd s = rows(balance_matrix(kin.positions, kin.positions[1]), kPlanarRows);
  const Eigen::MatrixXd m0 = s * kin.T;
  const Eigen::MatrixXd m1 = s * a1 * kin.T;
  const Eigen::MatrixXd b0 = s * kin.U;
  const Eigen::MatrixXd b1 = s * a1 * kin.U;
  FieldExpansion out;
  for (int k = 0; k < 2; ++k) {
    const Eigen::VectorXd p0 = solve_balance(m0, -b0.col(k));
    const Eigen::VectorXd p1 = solve_balance(m0, -(b1.col(k) + m1 * p0));
    out.leading[k] << (k == 0 ? 1.0 : 0.0), (k == 1 ? 1.0 : 0.0), p0[0], p0[1], p0[2];
    out.first_order[k] << 0.0, 0.0, p1[0], p1[1], p1[2];
  }
  return out;
}

std::array<Vector10d, 4> four_sphere_fields(const FourSphereState& state,
                                            const SwimmerParams& params, bool wall,
                                            const FieldOptions& options) {
  const auto as = four_sphere_assembly(state, params, wall, options.torque_offset);
  const Eigen::MatrixXd sa = as.S * as.A;
  const Eigen::MatrixXd m = sa * as.T;
  std::array<Vector10d, 4> out;
  for (int k = 0; k < 4; ++k) {
    const Eigen::VectorXd rhs = -(sa * as.U.col(k));
    const Eigen::VectorXd p = solve_balance(m, rhs);
    const double resid = (m * p - rhs).norm();
    if (resid > kResidualTol * (1.0 + rhs.norm() + m.norm() * p.norm())) {
      throw ConsistencyError("four-sphere balance residual " + fmt(resid));
    }
    out[k].setZero();
    out[k][k] = 1.0;
    out[k].tail<6>() = p;
  }
  return out;
}

std::vector<Vec3> sphere_forces(const ResistanceAssembly& assembly, const Eigen::VectorXd& u,
                                const SwimmerParams& params) {
  const Eigen::VectorXd au = assembly.A * u;
  const double drag = 6.0 * kPi * params.fluid.mu * params.a;
  std::vector<Vec3> f(assembly.positions.size());
  for (std::size_t i = 0; i < f.size(); ++i) {
    f[i] = drag * au.segment<3>(3 * static_cast<Eigen::Index>(i));
  }
  return f;
}

}  // namespace wallstokes::swimmer
