#include "wallstokes/sim.hpp"

#include <cmath>
#include <numbers>
#include <ostream>

#include <Eigen/Geometry>

#include "wallstokes/errors.hpp"
#include "wallstokes/io.hpp"

namespace wallstokes {

Stroke::Stroke(std::vector<StrokeKnot> knots) : knots_(std::move(knots)) {
  if (knots_.empty()) return;
  if (knots_.front().t != 0.0) throw DomainError("stroke must start at t = 0");
  const auto n = knots_.front().xi.size();
  for (std::size_t i = 0; i < knots_.size(); ++i) {
    if (knots_[i].xi.size() != n) throw DomainError("stroke knots differ in dimension");
    if (!knots_[i].xi.allFinite() || !std::isfinite(knots_[i].t)) {
      throw DomainError("stroke knot " + std::to_string(i) + " is not finite");
    }
    if (i > 0 && !(knots_[i].t > knots_[i - 1].t)) {
      throw DomainError("stroke knot times must strictly increase");
    }
  }
}

Stroke Stroke::hold(const Eigen::VectorXd& xi, double duration) {
  if (!(duration > 0.0)) throw DomainError("stroke duration must be positive");
  return Stroke({{0.0, xi}, {duration, xi}});
}

Stroke Stroke::through(const std::vector<Eigen::VectorXd>& shapes, double dt_segment) {
  if (!(dt_segment > 0.0)) throw DomainError("segment duration must be positive");
  std::vector<StrokeKnot> k;
  for (std::size_t i = 0; i < shapes.size(); ++i) {
    k.push_back({static_cast<double>(i) * dt_segment, shapes[i]});
  }
  return Stroke(std::move(k));
}

Eigen::VectorXd Stroke::shape(double t) const {
  if (knots_.empty()) throw DomainError("empty stroke");
  if (t <= knots_.front().t) return knots_.front().xi;
  if (t >= knots_.back().t) return knots_.back().xi;
  std::size_t i = 1;
  while (knots_[i].t < t) ++i;
  const auto& k0 = knots_[i - 1];
  const auto& k1 = knots_[i];
  const double s = (t - k0.t) / (k1.t - k0.t);
  return k0.xi + s * (k1.xi - k0.xi);
}

Stroke Stroke::reversed() const {
  std::vector<StrokeKnot> k;
  const double total = duration();
  for (auto it = knots_.rbegin(); it != knots_.rend(); ++it) k.push_back({total - it->t, it->xi});
  return Stroke(std::move(k));
}

Stroke Stroke::then(const Stroke& next) const {
  if (knots_.empty()) return next;
  if (next.knots_.empty()) return *this;
  if ((next.start() - end()).norm() > 1e-12 * (1.0 + end().norm())) {
    throw DomainError("concatenated stroke does not start where the previous one ends");
  }
  std::vector<StrokeKnot> k = knots_;
  const double t0 = duration();
  for (std::size_t i = 1; i < next.knots_.size(); ++i) {
    k.push_back({t0 + next.knots_[i].t, next.knots_[i].xi});
  }
  return Stroke(std::move(k));
}

Stroke Stroke::time_scaled(double factor) const {
  if (!(factor > 0.0)) throw DomainError("time scale must be positive");
  std::vector<StrokeKnot> k = knots_;
  for (auto& kn : k) kn.t *= factor;
  return Stroke(std::move(k));
}

namespace sim {
namespace {

double step_target(const Stroke& stroke, const IntegrateOptions& opts) {
  if (opts.dt > 0.0) return opts.dt;
  if (opts.dt < 0.0 || std::isnan(opts.dt)) throw DomainError("dt must be positive");
  return stroke.duration() / kDefaultStepsPerStroke;
}

void check_stroke(const Stroke& stroke, Eigen::Index dim, const Eigen::VectorXd& xi0) {
  if (stroke.empty()) throw DomainError("empty stroke");
  if (stroke.dim() != dim) throw DomainError("stroke dimension does not match the swimmer");
  if ((stroke.start() - xi0).norm() > 1e-12 * (1.0 + xi0.norm())) {
    throw DomainError("stroke does not start at the initial shape");
  }
}

// Runs fixed-step RK4 on a pose vector p driven by rate(t, xi, xi_dot, p),
// segment by segment. `emit` records a sample; `fix` projects stage states.
template <class Rate, class Emit, class Fix>
void rk4_segments(const Stroke& stroke, double dt, Eigen::VectorXd& p, Rate&& rate, Emit&& emit,
                  Fix&& fix, long& steps) {
  const auto& knots = stroke.knots();
  emit(0.0, knots.front().xi, p);
  for (std::size_t s = 1; s < knots.size(); ++s) {
    const double t0 = knots[s - 1].t;
    const double t1 = knots[s].t;
    const Eigen::VectorXd xi0 = knots[s - 1].xi;
    const Eigen::VectorXd xi_dot = (knots[s].xi - xi0) / (t1 - t0);
    const long n = std::max(1L, static_cast<long>(std::ceil((t1 - t0) / dt - 1e-9)));
    const double h = (t1 - t0) / static_cast<double>(n);
    auto shape_at = [&](double tau) -> Eigen::VectorXd { return xi0 + tau * xi_dot; };
    for (long k = 0; k < n; ++k) {
      const double tau = static_cast<double>(k) * h;
      const Eigen::VectorXd k1 = rate(t0 + tau, shape_at(tau), xi_dot, p);
      const Eigen::VectorXd k2 =
          rate(t0 + tau + h / 2, shape_at(tau + h / 2), xi_dot, fix(p + h / 2 * k1));
      const Eigen::VectorXd k3 =
          rate(t0 + tau + h / 2, shape_at(tau + h / 2), xi_dot, fix(p + h / 2 * k2));
      const Eigen::VectorXd k4 = rate(t0 + tau + h, shape_at(tau + h), xi_dot, fix(p + h * k3));
      p += h / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
      ++steps;
      const bool last = k + 1 == n;
      emit(last ? t1 : t0 + static_cast<double>(k + 1) * h, last ? knots[s].xi : shape_at(tau + h),
           p);
    }
  }
}

[[noreturn]] void inadmissible(double t, const std::string& why) {
  throw AdmissibilityError("state left the admissible set at t = " + io::num(t) + ": " + why);
}

}  // namespace

Trajectory integrate(const ThreeSphereState& state0, const Stroke& stroke,
                     const SwimmerParams& params, bool wall, const IntegrateOptions& opts) {
  swimmer::require_admissible(state0, params);
  const Eigen::Vector2d xi_start(state0.xi1, state0.xi2);
  check_stroke(stroke, 2, xi_start);
  const double dt = step_target(stroke, opts);

  Trajectory traj;
  traj.kind = SwimmerKind::three_sphere;
  Eigen::VectorXd pose = Eigen::Vector3d(state0.x, state0.y, state0.theta);

  auto rate = [&](double t, const Eigen::VectorXd& xi, const Eigen::VectorXd& xi_dot,
                  const Eigen::VectorXd& p) -> Eigen::VectorXd {
    const ThreeSphereState s{xi[0], xi[1], p[0], p[1], p[2]};
    std::array<Vector5d, 2> f;
    try {
      f = swimmer::three_sphere_fields(s, params, wall, opts.fields);
    } catch (const ConfigurationError& e) {
      inadmissible(t, e.what());
    }
    ++traj.field_evaluations;
    return (xi_dot[0] * f[0] + xi_dot[1] * f[1]).tail<3>();
  };
  auto emit = [&](double t, const Eigen::VectorXd& xi, const Eigen::VectorXd& p) {
    const ThreeSphereState s{xi[0], xi[1], p[0], p[1], p[2]};
    const auto v = swimmer::violations(s, params);
    if (!v.empty()) inadmissible(t, v.front());
    traj.t.push_back(t);
    traj.states.push_back(s.vector());
  };
  auto fix = [](const Eigen::VectorXd& p) { return p; };
  rk4_segments(stroke, dt, pose, rate, emit, fix, traj.steps);
  return traj;
}

Trajectory integrate(const FourSphereState& state0, const Stroke& stroke,
                     const SwimmerParams& params, bool wall, const IntegrateOptions& opts) {
  swimmer::require_admissible(state0, params);
  const Eigen::Vector4d xi_start(state0.xi[0], state0.xi[1], state0.xi[2], state0.xi[3]);
  check_stroke(stroke, 4, xi_start);
  const double dt = step_target(stroke, opts);

  Trajectory traj;
  traj.kind = SwimmerKind::four_sphere;
  // pose = (c, qw, qx, qy, qz)
  Eigen::VectorXd pose(7);
  const Eigen::Quaterniond q0 = state0.orient.normalized();
  pose << state0.c, q0.w(), q0.x(), q0.y(), q0.z();

  auto make_state = [](const Eigen::VectorXd& xi, const Eigen::VectorXd& p) {
    FourSphereState s;
    for (int i = 0; i < 4; ++i) s.xi[i] = xi[i];
    s.c = p.head<3>();
    s.orient = Eigen::Quaterniond(p[3], p[4], p[5], p[6]);
    return s;
  };
  auto rate = [&](double t, const Eigen::VectorXd& xi, const Eigen::VectorXd& xi_dot,
                  const Eigen::VectorXd& p) -> Eigen::VectorXd {
    const FourSphereState s = make_state(xi, p);
    std::array<Vector10d, 4> f;
    try {
      f = swimmer::four_sphere_fields(s, params, wall, opts.fields);
    } catch (const ConfigurationError& e) {
      inadmissible(t, e.what());
    }
    ++traj.field_evaluations;
    Vector10d v = Vector10d::Zero();
    for (int i = 0; i < 4; ++i) v += xi_dot[i] * f[i];
    const Eigen::Vector3d w = v.segment<3>(7);
    const Eigen::Quaterniond qd =
        s.orient * Eigen::Quaterniond(0.0, w.x(), w.y(), w.z());
    Eigen::VectorXd out(7);
    out << v.segment<3>(4), 0.5 * qd.w(), 0.5 * qd.x(), 0.5 * qd.y(), 0.5 * qd.z();
    return out;
  };
  auto fix = [](Eigen::VectorXd p) {
    p.tail<4>().normalize();
    return p;
  };
  auto emit = [&](double t, const Eigen::VectorXd& xi, Eigen::VectorXd& p) {
    traj.max_quaternion_drift =
        std::max(traj.max_quaternion_drift, std::abs(p.tail<4>().norm() - 1.0));
    p.tail<4>().normalize();
    const FourSphereState s = make_state(xi, p);
    const auto v = swimmer::violations(s, params);
    if (!v.empty()) inadmissible(t, v.front());
    Eigen::VectorXd row(11);
    row << xi, p;
    traj.t.push_back(t);
    traj.states.push_back(row);
  };
  rk4_segments(stroke, dt, pose, rate, emit, fix, traj.steps);
  return traj;
}

double wrap_angle(double theta) {
  const double two_pi = 2.0 * std::numbers::pi;
  double r = std::fmod(theta, two_pi);
  if (r < 0.0) r += two_pi;
  if (r >= two_pi) r = 0.0;
  return r;
}

double wrap_delta(double theta) {
  const double two_pi = 2.0 * std::numbers::pi;
  double r = std::fmod(theta, two_pi);
  if (r > std::numbers::pi) r -= two_pi;
  if (r <= -std::numbers::pi) r += two_pi;
  return r;
}

ThreeSphereState three_sphere_state(const Trajectory& traj, std::size_t i) {
  if (traj.kind != SwimmerKind::three_sphere) throw DomainError("not a three-sphere trajectory");
  return ThreeSphereState::from_vector(traj.states.at(i));
}

FourSphereState four_sphere_state(const Trajectory& traj, std::size_t i) {
  if (traj.kind != SwimmerKind::four_sphere) throw DomainError("not a four-sphere trajectory");
  const auto& r = traj.states.at(i);
  FourSphereState s;
  for (int k = 0; k < 4; ++k) s.xi[k] = r[k];
  s.c = r.segment<3>(4);
  s.orient = Eigen::Quaterniond(r[7], r[8], r[9], r[10]);
  return s;
}

Eigen::VectorXd net_displacement(const Trajectory& traj) {
  if (traj.kind == SwimmerKind::three_sphere) {
    if (traj.empty()) return Eigen::VectorXd::Zero(3);
    Eigen::VectorXd d = traj.states.back().tail<3>() - traj.states.front().tail<3>();
    d[2] = wrap_delta(d[2]);
    return d;
  }
  if (traj.empty()) return Eigen::VectorXd::Zero(6);
  const FourSphereState s0 = four_sphere_state(traj, 0);
  const FourSphereState s1 = four_sphere_state(traj, traj.states.size() - 1);
  const Eigen::AngleAxisd rel(s0.orient.normalized().conjugate() * s1.orient.normalized());
  Eigen::VectorXd d(6);
  d << s1.c - s0.c, wrap_delta(rel.angle()) * rel.axis();
  return d;
}

std::vector<std::string> validate_state(const ThreeSphereState& state, const SwimmerParams& params) {
  return swimmer::violations(state, params);
}

std::vector<std::string> validate_state(const FourSphereState& state, const SwimmerParams& params) {
  return swimmer::violations(state, params);
}

void write_csv(const Trajectory& traj, std::ostream& out) {
  if (traj.kind == SwimmerKind::three_sphere) {
    out << "t,xi1,xi2,x,y,theta\n";
  } else {
    out << "t,xi1,xi2,xi3,xi4,cx,cy,cz,qw,qx,qy,qz\n";
  }
  for (std::size_t i = 0; i < traj.states.size(); ++i) {
    out << io::num(traj.t[i]);
    const auto& r = traj.states[i];
    for (Eigen::Index k = 0; k < r.size(); ++k) {
      const bool theta = traj.kind == SwimmerKind::three_sphere && k == 4;
      out << ',' << io::num(theta ? wrap_angle(r[k]) : r[k]);
    }
    out << '\n';
  }
}

}  // namespace sim
}  // namespace wallstokes
