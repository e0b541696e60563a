#include <numbers>
#include <random>

#include <Eigen/Geometry>

#include "doctest.h"
#include "support/oracles.hpp"
#include "wallstokes/errors.hpp"
#include "wallstokes/swimmer.hpp"

using namespace wallstokes;
using oracle::kPi;

namespace {

Eigen::Matrix<double, 5, 5> S_matrix() {
  Eigen::Matrix<double, 5, 5> s = Eigen::Matrix<double, 5, 5>::Zero();
  s(0, 1) = s(1, 0) = 1;
  s(2, 2) = -1;
  s(3, 3) = 1;
  s(4, 4) = -1;
  return s;
}

Eigen::Matrix<double, 5, 5> T_matrix() {
  return Eigen::Matrix<double, 5, 1>(1, 1, -1, 1, -1).asDiagonal();
}

SwimmerParams radius(double a) {
  SwimmerParams p;
  p.a = a;
  return p;
}

}  // namespace

TEST_CASE("three-sphere positions") {
  const auto x = swimmer::three_sphere_positions({1, 1, 0, 5, 0});
  CHECK((x[0] - Vec3(-1, 5, 0)).norm() < 1e-15);
  CHECK((x[1] - Vec3(0, 5, 0)).norm() < 1e-15);
  CHECK((x[2] - Vec3(1, 5, 0)).norm() < 1e-15);
  const auto v = swimmer::three_sphere_positions({0.7, 1.3, 2, 5, kPi / 2});
  CHECK((v[0] - Vec3(2, 5 - 0.7, 0)).norm() < 1e-15);
  CHECK((v[2] - Vec3(2, 5 + 1.3, 0)).norm() < 1e-15);
}

TEST_CASE("three-sphere T and U are kinematic Jacobians") {
  const ThreeSphereState s{1.1, 0.8, 0.3, 4, 0.6};
  const auto as = swimmer::three_sphere_assembly(s, radius(0.01), true);
  auto pos = [](const Eigen::VectorXd& q) {
    const auto x = swimmer::three_sphere_positions({q[0], q[1], q[2], q[3], q[4]});
    Eigen::VectorXd out(9);
    out << x[0], x[1], x[2];
    return out;
  };
  const Eigen::MatrixXd j = oracle::central_jacobian(pos, s.vector(), 1e-6);
  CHECK((j.leftCols(2) - as.U).norm() < 1e-8);
  CHECK((j.rightCols(3) - as.T).norm() < 1e-8);
}

TEST_CASE("four-sphere positions and tetrahedron") {
  const auto& t = swimmer::tetrahedron_directions();
  Vec3 sum = Vec3::Zero();
  for (int i = 0; i < 4; ++i) {
    sum += t[i];
    CHECK(t[i].norm() == doctest::Approx(1));
    for (int j = i + 1; j < 4; ++j) CHECK(t[i].dot(t[j]) == doctest::Approx(-1.0 / 3));
  }
  CHECK(sum.norm() < 1e-15);

  FourSphereState s;
  const auto x = swimmer::four_sphere_positions(s);
  for (int i = 0; i < 4; ++i) CHECK((x[i] - (Vec3(0, 10, 0) + t[i])).norm() < 1e-15);

  const Eigen::Quaterniond r(Eigen::AngleAxisd(0.8, Vec3(1, 2, 3).normalized()));
  FourSphereState rs = s;
  rs.orient = r * s.orient;
  const auto y = swimmer::four_sphere_positions(rs);
  for (int i = 0; i < 4; ++i) CHECK(((y[i] - rs.c) - r * (x[i] - s.c)).norm() < 1e-14);
}

TEST_CASE("four-sphere T and U are kinematic Jacobians") {
  FourSphereState s;
  s.xi = {1.0, 1.2, 0.9, 1.1};
  s.c = Vec3(0.3, 5, -0.2);
  s.orient = Eigen::Quaterniond(Eigen::AngleAxisd(0.9, Vec3(0.3, 0.5, 0.8).normalized()));
  const auto as = swimmer::four_sphere_assembly(s, radius(0.05), true);
  // Body-frame rotation: R(phi) = R0 exp(phi).
  auto pos = [&](const Eigen::VectorXd& q) {
    FourSphereState p = s;
    for (int i = 0; i < 4; ++i) p.xi[i] = q[i];
    p.c = q.segment<3>(4);
    const Vec3 phi = q.segment<3>(7);
    if (phi.norm() > 0) p.orient = s.orient * Eigen::Quaterniond(Eigen::AngleAxisd(phi.norm(), phi.normalized()));
    const auto x = swimmer::four_sphere_positions(p);
    Eigen::VectorXd out(12);
    out << x[0], x[1], x[2], x[3];
    return out;
  };
  Eigen::VectorXd q0 = Eigen::VectorXd::Zero(10);
  q0 << 1.0, 1.2, 0.9, 1.1, 0.3, 5, -0.2, 0, 0, 0;
  const Eigen::MatrixXd j = oracle::central_jacobian(pos, q0, 1e-6);
  CHECK((j.leftCols(4) - as.U).norm() < 1e-8);
  CHECK((j.rightCols(6) - as.T).norm() < 1e-8);
}

TEST_CASE("admissibility guards") {
  const auto p = radius(0.1);
  CHECK(swimmer::violations(ThreeSphereState{0.3, 0.3, 0, 5, 0}, p).empty());
  CHECK_FALSE(swimmer::violations(ThreeSphereState{0.2, 0.3, 0, 5, 0}, p).empty());
  CHECK_FALSE(swimmer::violations(ThreeSphereState{0.3, 0.3, 0, 0.35, kPi / 2}, p).empty());
  CHECK_FALSE(swimmer::violations(ThreeSphereState{0.3, 0.3, 0, -1, 0}, p).empty());
  CHECK_THROWS_AS(swimmer::require_admissible(ThreeSphereState{0.2, 1, 0, 5, 0}, p),
                  ConfigurationError);

  FourSphereState f;
  f.xi = {std::sqrt(1.5) * 0.1, 1, 1, 1};
  CHECK_FALSE(swimmer::violations(f, p).empty());
  f.xi = {0.2, 1, 1, 1};
  CHECK(swimmer::violations(f, p).empty());
  f.orient.coeffs() *= 1.001;
  CHECK_FALSE(swimmer::violations(f, p).empty());
}

TEST_CASE("assembly limits and overlap") {
  const std::vector<Vec3> pos{Vec3(0, 3, 0), Vec3(1, 3.5, 0.2)};
  const auto free = swimmer::assemble(pos, radius(0.01), false);
  CHECK((free.block<3, 3>(0, 0) - Eigen::Matrix3d::Identity()).norm() == 0);
  CHECK((free.block<3, 3>(3, 3) - Eigen::Matrix3d::Identity()).norm() == 0);
  CHECK((swimmer::assemble(pos, radius(1e-12), true) - Eigen::MatrixXd::Identity(6, 6)).norm() <
        1e-11);

  const std::vector<Vec3> one{Vec3(0, 4, 0)};
  const double a = 0.02;
  const auto a11 = swimmer::assemble(one, radius(a), true);
  CHECK(a11(0, 0) == doctest::Approx(oracle::lorentz_parallel(a, 4)).epsilon(1e-14));
  CHECK(a11(1, 1) == doctest::Approx(oracle::lorentz_perpendicular(a, 4)).epsilon(1e-14));

  double prev = 1e9;
  for (double y : {10.0, 20.0, 40.0}) {
    const std::vector<Vec3> p{Vec3(0, y, 0), Vec3(1, y + 0.5, 0)};
    const double d = (swimmer::assemble(p, radius(0.01), true) -
                      swimmer::assemble(p, radius(0.01), false)).norm();
    if (prev < 1e9) CHECK(prev / d == doctest::Approx(2).epsilon(0.05));
    prev = d;
  }

  const std::vector<Vec3> close{Vec3(0, 3, 0), Vec3(0.015, 3, 0)};
  CHECK_THROWS_AS(swimmer::assemble(close, radius(0.01), true), ConfigurationError);
}

TEST_CASE("interaction matrix does not depend on mu") {
  const std::vector<Vec3> pos{Vec3(0, 2, 0), Vec3(1, 2.5, 0.3), Vec3(-0.5, 1.5, 0)};
  const auto a = swimmer::interaction_matrix(pos, {1.0}, true);
  const auto b = swimmer::interaction_matrix(pos, {3.7}, true);
  CHECK((a - b).norm() < 1e-14 * a.norm());
}

TEST_CASE("three-sphere fields match high-precision reference") {
  struct Ref {
    ThreeSphereState s;
    double a;
    double f1[3], f2[3];
  };
  // 50-digit solutions of the same balance system.
  const Ref refs[] = {
      {{1, 1.4, 0, 3, 0.7}, 0.05,
       {0.25670342681230668, 0.21541364610546739, -0.00032872441627212307},
       {-0.25925155243654602, -0.21872557986372648, -0.00050686743138972672}},
      {{1, 1.2, 0, 1.5, 0.4}, 0.1,
       {0.31844733192958196, 0.12893601611393154, -0.0015152448072206742},
       {-0.31143163392259614, -0.13479930194553146, -0.0043398073771909331}},
  };
  for (const auto& r : refs) {
    const auto f = swimmer::three_sphere_fields(r.s, radius(r.a), true);
    CHECK(f[0][0] == 1);
    CHECK(f[0][1] == 0);
    CHECK(f[1][0] == 0);
    CHECK(f[1][1] == 1);
    for (int k = 0; k < 3; ++k) {
      CHECK(f[0][2 + k] == doctest::Approx(r.f1[k]).epsilon(1e-12));
      CHECK(f[1][2 + k] == doctest::Approx(r.f2[k]).epsilon(1e-12));
    }
  }
}

TEST_CASE("three-sphere small-radius limit") {
  for (double th : {0.0, 0.9, 2.5}) {
    const auto f = swimmer::three_sphere_fields({1, 1.4, 0, 5, th}, radius(1e-8), true);
    CHECK(f[0][2] == doctest::Approx(std::cos(th) / 3).epsilon(1e-6));
    CHECK(f[0][3] == doctest::Approx(std::sin(th) / 3).epsilon(1e-6));
    CHECK(std::abs(f[0][4]) < 1e-8);
    CHECK(f[1][2] == doctest::Approx(-std::cos(th) / 3).epsilon(1e-6));
  }
}

TEST_CASE("vertical swimmer: x and theta rates vanish") {
  const auto f = swimmer::three_sphere_fields({1, 1.4, 0, 3, kPi / 2}, radius(0.05), true);
  for (int k = 0; k < 2; ++k) {
    CHECK(std::abs(f[k][2]) < 1e-15);
    CHECK(std::abs(f[k][4]) < 1e-15);
  }
}

TEST_CASE("symmetry identities hold at random states") {
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> xi(0.6, 1.6), y(2.0, 6.0), th(0.0, 2 * kPi);
  const auto p = radius(0.05);
  for (int k = 0; k < 20; ++k) {
    const ThreeSphereState s{xi(rng), xi(rng), 0, y(rng), th(rng)};
    const auto f = swimmer::three_sphere_fields(s, p, true);
    const auto g = swimmer::three_sphere_fields({s.xi2, s.xi1, 0, s.y, 2 * kPi - s.theta}, p, true);
    CHECK((f[0] - S_matrix() * g[1]).norm() <= 1e-10 * f[0].norm());
    CHECK((f[1] - S_matrix() * g[0]).norm() <= 1e-10 * f[1].norm());
    const auto t = swimmer::three_sphere_fields({s.xi1, s.xi2, 0, s.y, kPi - s.theta}, p, true);
    CHECK((f[0] - T_matrix() * t[0]).norm() <= 1e-10 * f[0].norm());
    CHECK((f[1] - T_matrix() * t[1]).norm() <= 1e-10 * f[1].norm());
  }
}

TEST_CASE("self-propulsion residual and planar confinement") {
  const ThreeSphereState s{0.9, 1.3, 0.2, 2.5, 0.8};
  const auto p = radius(0.05);
  const auto as = swimmer::three_sphere_assembly(s, p, true);
  const auto f = swimmer::three_sphere_fields(s, p, true);
  for (const auto& v : f) {
    const Eigen::VectorXd u = as.T * v.tail<3>() + as.U * v.head<2>();
    const auto forces = swimmer::sphere_forces(as, u, p);
    Vec3 total = Vec3::Zero(), torque = Vec3::Zero();
    double scale = 0;
    for (int i = 0; i < 3; ++i) {
      total += forces[i];
      torque += (as.positions[i] - as.positions[1]).cross(forces[i]);
      scale += forces[i].norm();
      CHECK(u[3 * i + 2] == 0);
    }
    CHECK(total.norm() < 1e-10 * scale);
    CHECK(torque.norm() < 1e-10 * scale);
  }
}

TEST_CASE("fields are independent of mu and x") {
  const ThreeSphereState s{0.9, 1.3, 0.2, 2.5, 0.8};
  SwimmerParams p = radius(0.05), q = p;
  q.fluid.mu = 4.2;
  const auto f = swimmer::three_sphere_fields(s, p, true);
  const auto g = swimmer::three_sphere_fields(s, q, true);
  ThreeSphereState shifted = s;
  shifted.x = -7;
  const auto h = swimmer::three_sphere_fields(shifted, p, true);
  for (int k = 0; k < 2; ++k) {
    CHECK((f[k] - g[k]).norm() < 1e-14);
    CHECK((f[k] - h[k]).norm() < 1e-14);
  }
}

TEST_CASE("free-space three-sphere swims along its axis") {
  const auto f = swimmer::three_sphere_fields({0.9, 1.3, 0, 2, 0.8}, radius(0.05), false);
  for (const auto& v : f) {
    CHECK(std::abs(v[4]) < 1e-15);
    CHECK(v[3] / v[2] == doctest::Approx(std::tan(0.8)).epsilon(1e-12));
  }
}

TEST_CASE("first-order expansion matches small-radius fields") {
  const ThreeSphereState s{1, 1.4, 0, 20, 0.7};
  const auto e = swimmer::three_sphere_field_expansion(s, true);
  auto residual = [&](double a) {
    const auto f = swimmer::three_sphere_fields(s, radius(a), true);
    double r = 0;
    for (int k = 0; k < 2; ++k) r += (f[k] - e.leading[k] - a * e.first_order[k]).norm();
    return r;
  };
  const double r1 = residual(2e-4), r2 = residual(1e-4);
  CHECK(r1 < 1e-3 * 2e-4);
  CHECK(r1 / r2 == doctest::Approx(4).epsilon(0.1));
}

TEST_CASE("rotlet option changes only the rotation balance") {
  const ThreeSphereState s{1, 1.4, 0, 2, 0.7};
  FieldOptions o;
  o.rotlet = true;
  const auto f = swimmer::three_sphere_fields(s, radius(0.1), true);
  const auto g = swimmer::three_sphere_fields(s, radius(0.1), true, o);
  CHECK((f[0] - g[0]).norm() > 0);
  CHECK((f[0] - g[0]).norm() < 1e-2 * f[0].norm());
}

TEST_CASE("four-sphere fields: far field, translation and torque reference") {
  FourSphereState s;
  s.xi = {1.0, 1.2, 0.9, 1.1};
  s.orient = Eigen::Quaterniond(Eigen::AngleAxisd(0.9, Vec3(0.3, 0.5, 0.8).normalized()));
  const auto p = radius(0.2);

  std::vector<double> ys, devs;
  for (double y : {10.0, 20.0, 40.0, 80.0}) {
    s.c = Vec3(0.3, y, -0.2);
    const auto w = swimmer::four_sphere_fields(s, p, true);
    const auto f = swimmer::four_sphere_fields(s, p, false);
    double d = 0;
    for (int k = 0; k < 4; ++k) d += (w[k] - f[k]).squaredNorm();
    ys.push_back(y);
    devs.push_back(std::sqrt(d));
  }
  CHECK(oracle::loglog_slope(ys, devs) == doctest::Approx(-1).epsilon(0.05));

  s.c = Vec3(0.3, 4, -0.2);
  const auto base = swimmer::four_sphere_fields(s, p, true);
  FourSphereState moved = s;
  moved.c = Vec3(-2.0, 4, 3.0);
  const auto m = swimmer::four_sphere_fields(moved, p, true);
  FieldOptions o;
  o.torque_offset = Vec3(1, 0, 0);
  const auto r = swimmer::four_sphere_fields(s, p, true, o);
  for (int k = 0; k < 4; ++k) {
    CHECK((base[k] - m[k]).norm() < 1e-13);
    CHECK((base[k] - r[k]).norm() < 1e-12);
  }
}

TEST_CASE("degenerate four-sphere balance") {
  FourSphereState s;
  s.xi = {1, 1, 1, 1};
  CHECK_NOTHROW(swimmer::four_sphere_fields(s, radius(0.01), true));
}
