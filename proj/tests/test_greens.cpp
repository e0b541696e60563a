#include <random>
#include <vector>

#include "doctest.h"
#include "support/oracles.hpp"
#include "wallstokes/errors.hpp"
#include "wallstokes/greens.hpp"

using namespace wallstokes;
using oracle::kPi;

namespace {

double max_abs(const Tensor3& m) { return m.cwiseAbs().maxCoeff(); }

}  // namespace

TEST_CASE("stokeslet along x") {
  const Tensor3 g = greens::stokeslet(Vec3(1, 0, 0));
  Tensor3 want = Tensor3::Zero();
  want.diagonal() << 2, 1, 1;
  want /= 8 * kPi;
  CHECK(max_abs(g - want) < 1e-16);
}

TEST_CASE("stokeslet homogeneity and symmetry") {
  const Vec3 r(1, 2, 3);
  CHECK(max_abs(greens::stokeslet(2 * r) - greens::stokeslet(r) / 2) < 1e-16);
  const Vec3 s(0.3, -1.1, 2.0);
  CHECK(max_abs(greens::stokeslet(-s) - greens::stokeslet(s)) < 1e-16);
  CHECK(max_abs(greens::stokeslet(s) - greens::stokeslet(s).transpose()) < 1e-16);
}

TEST_CASE("stokeslet scales with 1/mu") {
  const Vec3 r(0.5, 0.2, -0.4);
  CHECK(max_abs(greens::stokeslet(r, {2.5}) * 2.5 - greens::stokeslet(r)) < 1e-15);
}

TEST_CASE("stokeslet singular at the source") {
  CHECK_THROWS_AS(greens::stokeslet(Vec3::Zero()), SingularityError);
  CHECK_THROWS_AS(greens::stokeslet(Vec3(1e-13, 0, 0)), SingularityError);
}

TEST_CASE("blake tensor matches high-precision reference") {
  // 50-digit evaluation of the image system at r = (1,2,0), r0 = (0,1,1).
  const double ref[9] = {0.014369318150052684,  0.0029974491132838137, -0.0077564925071186713,
                         0.0101360142040361,    0.0024717096654655394, -0.0101360142040361,
                         -0.0077564925071186713, -0.0029974491132838137, 0.014369318150052684};
  const Tensor3 k = greens::blake_tensor(Vec3(1, 2, 0), Vec3(0, 1, 1));
  for (int i = 0; i < 3; ++i) {
    for (int j = 0; j < 3; ++j) CHECK(k(i, j) == doctest::Approx(ref[3 * i + j]).epsilon(1e-13));
  }
}

TEST_CASE("wall no-slip for random sources") {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> u(-1, 1), h(0.01, 4);
  double worst = 0;
  for (int k = 0; k < 100; ++k) {
    const Vec3 r0(3 * u(rng), h(rng), 3 * u(rng));
    const Vec3 f(u(rng), u(rng), u(rng));
    const Vec3 w(5 * u(rng), 0, 5 * u(rng));
    const double v = (greens::blake_tensor(w, r0) * f).norm();
    worst = std::max(worst, v / (greens::stokeslet(w - r0) * f).norm());
  }
  CHECK(worst < 1e-12);
}

TEST_CASE("wall no-slip example point") {
  const Vec3 r0(0.4, 1.3, -0.7), w(2, 0, 5);
  for (const Vec3& f : {Vec3(1, 0, 0), Vec3(0, 1, 0), Vec3(0, 0, 1)}) {
    CHECK((greens::blake_tensor(w, r0) * f).norm() < 1e-16);
  }
}

TEST_CASE("far field approaches the stokeslet") {
  const Vec3 r(0, 100, 0), r0(0, 101, 0);
  const double dev = (greens::blake_tensor(r, r0) - greens::stokeslet(r - r0)).norm();
  CHECK(dev < 2.0 / 100);
  CHECK(dev > 0.01 / 100);

  std::vector<double> ys, devs;
  for (double y : {10.0, 20.0, 40.0, 80.0}) {
    const Vec3 a(0.3, y, -0.2), b(1.1, y + 0.7, 0.4);
    ys.push_back(y);
    devs.push_back((greens::blake_tensor(a, b) - greens::stokeslet(a - b)).norm());
  }
  CHECK(oracle::loglog_slope(ys, devs) == doctest::Approx(-1).epsilon(0.05));
}

TEST_CASE("reciprocity") {
  const Vec3 r(1, 2, 0), r0(0, 1, 1);
  CHECK(max_abs(greens::blake_tensor(r, r0) - greens::blake_tensor(r0, r).transpose()) < 1e-15);
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> u(-2, 2), h(0.05, 3);
  for (int k = 0; k < 50; ++k) {
    const Vec3 p(u(rng), h(rng), u(rng)), q(u(rng), h(rng), u(rng));
    const Tensor3 a = greens::blake_tensor(p, q);
    CHECK((a - greens::blake_tensor(q, p).transpose()).norm() <= 1e-12 * a.norm());
  }
}

TEST_CASE("mirror symmetry through x = const") {
  const Vec3 r(0.7, 1.2, -0.3), r0(-0.4, 0.9, 0.5);
  const double x0 = 0.25;
  auto mirror = [&](Vec3 v) {
    v.x() = 2 * x0 - v.x();
    return v;
  };
  const Eigen::Matrix3d m = Eigen::Vector3d(-1, 1, 1).asDiagonal();
  const Tensor3 k = greens::blake_tensor(r, r0);
  CHECK((greens::blake_tensor(mirror(r), mirror(r0)) - m * k * m).norm() < 1e-15);
}

TEST_CASE("blake tensor domain and singularity errors") {
  CHECK_THROWS_AS(greens::blake_tensor(Vec3(1, 1, 0), Vec3(1, 1, 0)), SingularityError);
  CHECK_THROWS_AS(greens::blake_tensor(Vec3(1, 1, 0), Vec3(0, 0, 0)), DomainError);
  CHECK_THROWS_AS(greens::blake_tensor(Vec3(1, 1, 0), Vec3(0, -1, 0)), DomainError);
  CHECK_THROWS_AS(greens::stokeslet(Vec3(1, 0, 0), {0.0}), DomainError);
  CHECK_NOTHROW(greens::blake_tensor(Vec3(1, 0, 0), Vec3(0, 1, 0)));
}

TEST_CASE("self image gives the Lorentz wall drag") {
  for (double y : {0.8, 2.0, 10.0}) {
    const Tensor3 s = greens::self_image(Vec3(0.3, y, -0.2));
    CHECK(std::abs(s(0, 1)) < 1e-18);
    CHECK(std::abs(s(0, 2)) < 1e-18);
    CHECK(std::abs(s(1, 2)) < 1e-18);
    // Exact for point forces: 1 - 6 pi a K_self = Lorentz factors.
    const double a = 0.01;
    const Tensor3 corr = Tensor3::Identity() - 6 * kPi * a * s;
    CHECK(corr(0, 0) == doctest::Approx(oracle::lorentz_parallel(a, y)).epsilon(1e-14));
    CHECK(corr(1, 1) == doctest::Approx(oracle::lorentz_perpendicular(a, y)).epsilon(1e-14));
    CHECK(corr(2, 2) == doctest::Approx(oracle::lorentz_parallel(a, y)).epsilon(1e-14));
  }
  const Tensor3 ref = greens::self_image(Vec3(0.3, 0.8, -0.2));
  CHECK(ref(0, 0) == doctest::Approx(-0.037301939787162964).epsilon(1e-14));
  CHECK(ref(1, 1) == doctest::Approx(-0.074603879574325932).epsilon(1e-14));
  CHECK_THROWS_AS(greens::self_image(Vec3(0, 0, 0)), DomainError);
}

TEST_CASE("self image decays like 1/y") {
  const double n1 = greens::self_image(Vec3(0, 10, 0)).norm();
  const double n2 = greens::self_image(Vec3(0, 20, 0)).norm();
  CHECK(n1 / n2 == doctest::Approx(2).epsilon(1e-12));
}

TEST_CASE("point force superposition") {
  const Vec3 eval(0.2, 1.5, 0.1);
  CHECK(greens::point_force_velocity({}, eval).norm() == 0);
  std::vector<PointForce> src{{Vec3(0, 1, 0), Vec3(1, 2, 3)}, {Vec3(1, 2, -1), Vec3(-1, 0, 2)}};
  const Vec3 v = greens::point_force_velocity(src, eval);
  const Vec3 want = greens::blake_tensor(eval, src[0].position) * src[0].force +
                    greens::blake_tensor(eval, src[1].position) * src[1].force;
  CHECK((v - want).norm() < 1e-16);
  auto doubled = src;
  for (auto& s : doubled) s.force *= 2;
  CHECK((greens::point_force_velocity(doubled, eval) - 2 * v).norm() < 1e-15);
  CHECK(greens::point_force_velocity(src, Vec3(0.5, 0, 3)).norm() < 1e-16);
  CHECK_THROWS_AS(greens::point_force_velocity(src, Vec3(0, 1, 0)), SingularityError);
}
