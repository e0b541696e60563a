#include <random>

#include <Eigen/Geometry>

#include "doctest.h"
#include "support/oracles.hpp"
#include "wallstokes/errors.hpp"
#include "wallstokes/liealg.hpp"

using namespace wallstokes;
using oracle::kPi;

namespace {

FieldHandle linear(const Eigen::MatrixXd& m) {
  FieldHandle h;
  h.eval = [m](const Eigen::VectorXd& x) -> Eigen::VectorXd { return m * x; };
  return h;
}

FieldHandle quadratic(const Eigen::Vector3d& c, const Eigen::Matrix3d& m, const Eigen::Vector3d& q) {
  FieldHandle h;
  h.eval = [=](const Eigen::VectorXd& x) -> Eigen::VectorXd {
    Eigen::Vector3d out = c + m * x;
    for (int i = 0; i < 3; ++i) out[i] += q[i] * x[(i + 1) % 3] * x[(i + 2) % 3];
    return out;
  };
  return h;
}

FieldHandle scaled(const FieldHandle& f, double s) {
  FieldHandle h = f;
  h.eval = [f, s](const Eigen::VectorXd& x) -> Eigen::VectorXd { return s * f(x); };
  return h;
}

Eigen::VectorXd three(double xi1, double xi2, double y, double theta) {
  Eigen::VectorXd x(5);
  x << xi1, xi2, 0, y, theta;
  return x;
}

SwimmerParams radius(double a) {
  SwimmerParams p;
  p.a = a;
  return p;
}

}  // namespace

TEST_CASE("step sizes") {
  Eigen::VectorXd x(3);
  x << 0.5, -20, 0;
  const auto h = liealg::fd_steps(x, 1e-4);
  CHECK(h[0] == 1e-4);
  CHECK(h[1] == doctest::Approx(2e-3));
  CHECK(h[2] == 1e-4);
}

TEST_CASE("constant fields commute") {
  FieldHandle f, g;
  f.eval = [](const Eigen::VectorXd&) -> Eigen::VectorXd { return Eigen::Vector3d(1, 2, 3); };
  g.eval = [](const Eigen::VectorXd&) -> Eigen::VectorXd { return Eigen::Vector3d(-1, 0, 4); };
  CHECK(liealg::lie_bracket(f, g, Eigen::Vector3d(0.3, 0.1, 2)).norm() == 0);
}

TEST_CASE("linear fields: bracket is (BA - AB) x") {
  std::mt19937_64 rng(2);
  std::normal_distribution<double> n;
  Eigen::Matrix3d a, b;
  for (int i = 0; i < 9; ++i) {
    a.data()[i] = n(rng);
    b.data()[i] = n(rng);
  }
  const Eigen::Vector3d x(0.4, -1.2, 2.0);
  const Eigen::VectorXd got = liealg::lie_bracket(linear(a), linear(b), x);
  const Eigen::Vector3d want = (b * a - a * b) * x;
  CHECK((got - want).norm() < 1e-9 * want.norm());
}

TEST_CASE("antisymmetry and Jacobi identity") {
  const auto f = quadratic({1, 0, 0.5}, Eigen::Matrix3d::Identity() * 0.3, {0.2, -0.1, 0.4});
  const auto g = quadratic({0, 1, -0.2}, Eigen::Matrix3d::Random(), {-0.3, 0.5, 0.1});
  const auto h = quadratic({0.3, 0.2, 1}, Eigen::Matrix3d::Random(), {0.6, 0.2, -0.7});
  const Eigen::Vector3d x(0.7, -0.3, 1.1);
  CHECK((liealg::lie_bracket(f, g, x) + liealg::lie_bracket(g, f, x)).norm() < 1e-12);
  const double s = liealg::kNestedStep;
  const Eigen::VectorXd j = liealg::lie_bracket(f, liealg::bracket_field(g, h), x, s) +
                            liealg::lie_bracket(g, liealg::bracket_field(h, f), x, s) +
                            liealg::lie_bracket(h, liealg::bracket_field(f, g), x, s);
  CHECK(j.norm() < 1e-8);
}

TEST_CASE("stencil must stay inside the domain") {
  auto f = linear(Eigen::Matrix2d::Identity());
  f.admissible = [](const Eigen::VectorXd& x) { return x[0] > 0; };
  const auto g = linear(Eigen::Matrix2d::Ones());
  CHECK_THROWS_AS(liealg::lie_bracket(f, g, Eigen::Vector2d(2e-4, 1)), StepTooLargeError);
  CHECK_NOTHROW(liealg::lie_bracket(f, g, Eigen::Vector2d(1e-2, 1)));
}

TEST_CASE("three-sphere rank examples") {
  const auto h = liealg::three_sphere_handles(radius(0.01), true);
  const auto generic = liealg::lie_algebra_rank(h, three(1, 1.4, 10, kPi / 4));
  CHECK(generic.dimension == 5);
  CHECK(generic.words.size() == generic.word_matrix.cols());
  CHECK(generic.singular_values.size() == 5);

  const auto vertical = liealg::lie_algebra_rank(h, three(1, 1.4, 10, kPi / 2));
  CHECK(vertical.dimension <= 3);
  CHECK(vertical.dimension >= 2);

  const auto free = liealg::lie_algebra_rank(liealg::three_sphere_handles(radius(0.01), false),
                                             three(1, 1.4, 10, kPi / 4));
  CHECK(free.dimension < 5);
}

TEST_CASE("rank is invariant under field rescaling") {
  auto h = liealg::three_sphere_handles(radius(0.01), true);
  const auto x = three(1, 1.4, 10, 0.9);
  const int base = liealg::lie_algebra_rank(h, x).dimension;
  h[0] = scaled(h[0], 3.7);
  h[1] = scaled(h[1], 0.2);
  CHECK(liealg::lie_algebra_rank(h, x).dimension == base);
}

TEST_CASE("depth controls the word list") {
  const auto h = liealg::three_sphere_handles(radius(0.01), true);
  const auto x = three(1, 1.4, 10, 0.9);
  CHECK(liealg::lie_algebra_rank(h, x, 1).words.size() == 2);
  CHECK(liealg::lie_algebra_rank(h, x, 2).words.size() == 3);
  CHECK(liealg::lie_algebra_rank(h, x, 2).dimension == 3);
  CHECK(liealg::lie_algebra_rank(h, x, 3).words.size() == 5);
}

TEST_CASE("four-sphere rank far from the wall") {
  FourSphereState s;
  s.xi = {1.0, 1.2, 0.9, 1.1};
  s.c = Vec3(0.3, 100, -0.2);
  s.orient = Eigen::Quaterniond(Eigen::AngleAxisd(0.9, Vec3(0.3, 0.5, 0.8).normalized()));
  const auto h = liealg::four_sphere_handles(s, radius(0.05), true);
  const auto r = liealg::lie_algebra_rank(h, liealg::four_sphere_chart_point(s));
  CHECK(r.dimension == 10);
}

TEST_CASE("rank map") {
  liealg::RankGrid grid;
  grid.xi1.values = {0.015, 1.0};
  grid.xi2.values = {1.4};
  grid.y.values = {10};
  grid.theta.values = {0.5, kPi / 2};
  const auto rows = liealg::rank_map(grid, radius(0.01), true);
  REQUIRE(rows.size() == 4);
  CHECK(rows[0].xi1 == 0.015);
  CHECK(rows[0].theta == 0.5);
  CHECK(rows[1].theta == kPi / 2);
  CHECK(rows[2].xi1 == 1.0);
  CHECK(rows[0].dimension == -1);
  CHECK(std::isnan(rows[0].sigma_min_ratio));
  CHECK_FALSE(rows[0].error.empty());
  CHECK(rows[2].dimension == 5);
  CHECK(rows[3].dimension <= 3);

  const auto single = liealg::lie_algebra_rank(liealg::three_sphere_handles(radius(0.01), true),
                                               three(1.0, 1.4, 10, 0.5));
  CHECK(rows[2].dimension == single.dimension);
  CHECK(rows[2].sigma_min_ratio == single.singular_values.back() / single.singular_values.front());

  const auto parallel = liealg::rank_map(grid, radius(0.01), true, 3, liealg::kRankTol, 3);
  for (std::size_t i = 0; i < rows.size(); ++i) {
    CHECK(parallel[i].dimension == rows[i].dimension);
    CHECK((parallel[i].sigma_min_ratio == rows[i].sigma_min_ratio ||
           (std::isnan(parallel[i].sigma_min_ratio) && std::isnan(rows[i].sigma_min_ratio))));
  }

  grid.theta.values.clear();
  CHECK(liealg::rank_map(grid, radius(0.01), true).empty());
}
