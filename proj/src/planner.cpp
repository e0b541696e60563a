#include "wallstokes/planner.hpp"

#include <algorithm>
#include <cmath>
#include <optional>
#include <ostream>

#include <Eigen/Dense>

#include "wallstokes/errors.hpp"
#include "wallstokes/io.hpp"
#include "wallstokes/liealg.hpp"

namespace wallstokes::planner {
namespace {

using Vector5 = Eigen::Matrix<double, 5, 1>;

Vector5 state_delta(const ThreeSphereState& to, const ThreeSphereState& from) {
  Vector5 d = to.vector() - from.vector();
  d[4] = sim::wrap_delta(d[4]);
  return d;
}

void check_corners(const ThreeSphereState& center, const std::vector<Eigen::Vector2d>& shapes,
                   const SwimmerParams& params) {
  for (const auto& xi : shapes) {
    ThreeSphereState s = center;
    s.xi1 = xi[0];
    s.xi2 = xi[1];
    const auto v = swimmer::violations(s, params);
    if (!v.empty()) throw AdmissibilityError("loop corner is inadmissible: " + v.front());
  }
}

std::vector<Eigen::Vector2d> square(const Eigen::Vector2d& c, double side) {
  const double s = std::abs(side);
  const Eigen::Vector2d e1(s, 0.0), e2(0.0, s);
  if (side >= 0.0) return {c, c + e1, c + e1 + e2, c + e2, c};
  return {c, c + e2, c + e1 + e2, c + e1, c};
}

// One shooting leg: plan parameters q = (d1, d2, A0, A1, A2). d is the final
// direct shape move; A_k the signed total area of the loops centered at the
// start shape (k = 0) or at the start shape moved back by delta along e_k.
class Leg {
 public:
  Leg(const ThreeSphereState& start, const SwimmerParams& params, const PlannerOptions& opts)
      : start_(start), params_(params), opts_(opts) {
    xi0_ << start.xi1, start.xi2;
    eps_max_ = opts.loop_cap_fraction * xi0_.minCoeff();
    delta_ = opts.offset_fraction * xi0_.minCoeff();
    centers_[0] = xi0_;
    centers_[1] = xi0_ - Eigen::Vector2d(delta_, 0.0);
    centers_[2] = xi0_ - Eigen::Vector2d(0.0, delta_);
    for (int k = 1; k < 3; ++k) {
      ThreeSphereState s = start;
      s.xi1 = centers_[k][0];
      s.xi2 = centers_[k][1];
      if (!swimmer::violations(s, params).empty()) centers_[k] = 2.0 * xi0_ - centers_[k];
    }
    dt_ = 1.0 / opts.steps_per_side;
  }

  // Bracket-model initial guess for reaching `target`.
  Vector5 initial_guess(const ThreeSphereState& target) {
    const auto h = liealg::three_sphere_handles(params_, opts_.wall);
    const Eigen::VectorXd x = start_.vector();
    const auto b = liealg::bracket_field(h[0], h[1]);
    const Eigen::Vector3d b0 = b(x).tail<3>();
    std::array<Eigen::Vector3d, 3> cols;
    cols[0] = b0;
    for (int k = 1; k < 3; ++k) {
      const Eigen::Vector3d bb =
          liealg::lie_bracket(h[k - 1], b, x, liealg::kNestedStep).tail<3>();
      const double shift = centers_[k][k - 1] - xi0_[k - 1];
      cols[k] = b0 + shift * bb;
    }
    Eigen::Matrix3d m;
    for (int k = 0; k < 3; ++k) m.col(k) = cols[k];

    const Vector5 delta = state_delta(target, start_);
    const Eigen::Vector2d d = delta.head<2>();
    const auto f = swimmer::three_sphere_fields(start_, params_, opts_.wall);
    const Eigen::Vector3d drift = (d[0] * f[0] + d[1] * f[1]).tail<3>();
    const Eigen::Vector3d areas = m.colPivHouseholderQr().solve(delta.tail<3>() - drift);
    Vector5 q;
    q << d, areas;
    for (int k = 0; k < 3; ++k) {
      repeats_[k] = std::max(1, static_cast<int>(std::ceil(1.25 * std::abs(q[2 + k]) /
                                                           (eps_max_ * eps_max_))));
    }
    return q;
  }

  std::array<int, 3> repeats() const { return repeats_; }
  void set_repeats(const std::array<int, 3>& r) { repeats_ = r; }

  bool needs_more_repeats(const Vector5& q) const {
    for (int k = 0; k < 3; ++k) {
      if (std::abs(q[2 + k]) > repeats_[k] * eps_max_ * eps_max_) return true;
    }
    return false;
  }

  void grow_repeats(const Vector5& q, double margin) {
    for (int k = 0; k < 3; ++k) {
      const double need = std::abs(q[2 + k]) / (eps_max_ * eps_max_);
      if (need > repeats_[k]) repeats_[k] = static_cast<int>(std::ceil(margin * need));
    }
  }

  // Stroke for q with primitives, times starting at t0. The loop groups are
  // interleaved over rounds so the pose stays near the start.
  Stroke build(const Vector5& q, double t0, int leg, std::vector<PlanPrimitive>* prims) const {
    std::vector<StrokeKnot> knots{{0.0, xi0_}};
    auto push_path = [&](const std::vector<Eigen::Vector2d>& path, PlanPrimitive p) {
      p.t_start = t0 + knots.back().t;
      p.knot_times.push_back(p.t_start);
      for (std::size_t i = 1; i < path.size(); ++i) {
        const double len = (path[i] - path[i - 1]).norm();
        if (len <= 1e-13) {
          knots.back().xi = path[i];
          continue;
        }
        knots.push_back({knots.back().t + 1.0, path[i]});
        p.knot_times.push_back(t0 + knots.back().t);
      }
      p.t_end = t0 + knots.back().t;
      if (prims && p.knot_times.size() > 1) prims->push_back(std::move(p));
    };
    auto transit = [&](const Eigen::Vector2d& from, const Eigen::Vector2d& to) {
      if (from == to) return;
      PlanPrimitive tr;
      tr.kind = PlanPrimitive::Kind::transit;
      tr.leg = leg;
      tr.from = from;
      tr.to = to;
      push_path({from, to}, tr);
    };

    int rounds = 0;
    for (int k = 0; k < 3; ++k)
      if (q[2 + k] != 0.0) rounds = std::max(rounds, repeats_[k]);
    // Each batch leaves from and returns to the start shape along the same
    // segment, so the transits enclose no area.
    for (int r = 0; r < rounds; ++r) {
      for (int k = 0; k < 3; ++k) {
        const double area = q[2 + k];
        if (area == 0.0) continue;
        const int n = repeats_[k];
        const int count = static_cast<int>((static_cast<long>(r + 1) * n) / rounds -
                                           (static_cast<long>(r) * n) / rounds);
        if (count == 0) continue;
        const double side = std::copysign(std::sqrt(std::abs(area) / n), area);
        // Squares are centered on the nominal center so the holonomy has no
        // O(side^3) term.
        const Eigen::Vector2d c = centers_[k] - 0.5 * std::abs(side) * Eigen::Vector2d::Ones();
        transit(xi0_, c);
        PlanPrimitive lp;
        lp.kind = PlanPrimitive::Kind::loop;
        lp.leg = leg;
        lp.from = lp.to = c;
        lp.area = side * side * count * (area < 0.0 ? -1.0 : 1.0);
        lp.side = side;
        lp.repeats = count;
        std::vector<Eigen::Vector2d> path{c};
        const auto sq = square(c, side);
        for (int i = 0; i < count; ++i) path.insert(path.end(), sq.begin() + 1, sq.end());
        push_path(path, lp);
        transit(c, xi0_);
      }
    }
    const Eigen::Vector2d d = q.head<2>();
    if (d.norm() > 0.0) {
      PlanPrimitive mv;
      mv.kind = PlanPrimitive::Kind::shape_move;
      mv.leg = leg;
      mv.from = xi0_;
      mv.to = xi0_ + d;
      push_path({xi0_, xi0_ + d}, mv);
    }
    std::vector<StrokeKnot> generic;
    for (const auto& k : knots) generic.push_back({k.t, Eigen::VectorXd(k.xi)});
    return Stroke(std::move(generic));
  }

  std::optional<ThreeSphereState> simulate(const Vector5& q) const {
    const Stroke s = build(q, 0.0, 0, nullptr);
    if (s.knots().size() < 2) return start_;
    for (int k = 0; k < 3; ++k) {
      if (q[2 + k] == 0.0) continue;
      const double side = std::sqrt(std::abs(q[2 + k]) / repeats_[k]);
      if (side > eps_max_ * (1.0 + 1e-12)) return std::nullopt;
    }
    try {
      IntegrateOptions io;
      io.dt = dt_;
      const Trajectory tr = sim::integrate(start_, s, params_, opts_.wall, io);
      return sim::three_sphere_state(tr, tr.states.size() - 1);
    } catch (const AdmissibilityError&) {
      return std::nullopt;
    } catch (const ConfigurationError&) {
      return std::nullopt;
    }
  }

  double dt() const { return dt_; }

 private:
  ThreeSphereState start_;
  SwimmerParams params_;
  PlannerOptions opts_;
  Eigen::Vector2d xi0_;
  std::array<Eigen::Vector2d, 3> centers_;
  std::array<int, 3> repeats_{0, 0, 0};
  double eps_max_ = 0.0;
  double delta_ = 0.0;
  double dt_ = 0.0;
};

struct LegResult {
  Stroke stroke;
  std::vector<PlanPrimitive> primitives;
  ThreeSphereState reached;
  double error = 0.0;
  int iterations = 0;
  double dt = 0.0;
  std::vector<double> history;
  int refinements = 0;
};

LegResult shoot(const ThreeSphereState& start, const ThreeSphereState& target,
                const SwimmerParams& params, const PlannerOptions& opts, int budget, double tol,
                double t0, int leg_index) {
  Leg leg(start, params, opts);
  Vector5 q = leg.initial_guess(target);

  auto residual = [&](const Vector5& p) -> std::optional<Vector5> {
    const auto s = leg.simulate(p);
    if (!s) return std::nullopt;
    return state_delta(*s, target);
  };

  LegResult out;
  std::optional<Vector5> r = residual(q);
  // Shrink an inadmissible initial guess toward the pure shape move.
  for (int k = 0; !r && k < 30; ++k) {
    q.tail<3>() *= 0.5;
    r = residual(q);
  }
  if (!r) {
    q.tail<3>().setZero();
    r = residual(q);
    if (!r) throw AdmissibilityError("direct shape move leaves the admissible set");
  }
  double err = r->norm();
  out.history.push_back(err);

  auto fd_jacobian = [&](const Vector5& p, const Vector5& r0) {
    Eigen::Matrix<double, 5, 5> j;
    for (int k = 0; k < 5; ++k) {
      const double h = (k < 2 ? 1e-6 : 1e-4) * std::max(1.0, std::abs(p[k]));
      Vector5 pk = p;
      pk[k] += h;
      auto rk = residual(pk);
      if (!rk) {
        pk[k] = p[k] - h;
        rk = residual(pk);
        if (!rk) throw AdmissibilityError("plan sensitivity stencil is inadmissible");
        j.col(k) = (r0 - *rk) / h;
      } else {
        j.col(k) = (*rk - r0) / h;
      }
    }
    return j;
  };

  Eigen::Matrix<double, 5, 5> jac = fd_jacobian(q, *r);
  bool fresh = true;
  double lambda = 1e-2 * jac.norm();
  while (err > tol && out.iterations < budget) {
    const Eigen::Matrix<double, 5, 5> lhs =
        jac.transpose() * jac + lambda * lambda * Eigen::Matrix<double, 5, 5>::Identity();
    const Vector5 step = lhs.ldlt().solve(-jac.transpose() * *r);
    const Vector5 trial = q + step;
    ++out.iterations;

    if (leg.needs_more_repeats(trial)) {
      // Finer loops change the map slightly: re-evaluate the current plan and
      // its sensitivities before stepping again.
      const auto kept = leg.repeats();
      leg.grow_repeats(trial, 2.0);
      const auto rb = residual(q);
      if (!rb) {
        leg.set_repeats(kept);
        lambda *= 10.0;
        continue;
      }
      r = rb;
      err = r->norm();
      out.history.push_back(err);
      ++out.refinements;
      jac = fd_jacobian(q, *r);
      fresh = true;
      continue;
    }

    const auto rt = residual(trial);
    if (rt && rt->norm() < err) {
      // Broyden update keeps the model current without new sensitivities.
      const Vector5 dq = trial - q;
      jac += ((*rt - *r) - jac * dq) * dq.transpose() / dq.squaredNorm();
      q = trial;
      r = rt;
      err = rt->norm();
      out.history.push_back(err);
      lambda /= 10.0;
      fresh = false;
    } else if (fresh) {
      lambda *= 10.0;
    } else {
      // A stale model is refreshed before the damping is raised.
      jac = fd_jacobian(q, *r);
      fresh = true;
    }
  }

  out.stroke = leg.build(q, t0, leg_index, &out.primitives);
  out.reached = *leg.simulate(q);
  out.error = err;
  out.dt = leg.dt();
  return out;
}

const char* kind_name(PlanPrimitive::Kind k) {
  switch (k) {
    case PlanPrimitive::Kind::loop:
      return "loop";
    case PlanPrimitive::Kind::transit:
      return "transit";
    case PlanPrimitive::Kind::shape_move:
      return "shape_move";
  }
  return "?";
}

}  // namespace

double state_distance(const ThreeSphereState& a, const ThreeSphereState& b) {
  return state_delta(a, b).norm();
}

Stroke bracket_loop(const ThreeSphereState& center, int i, int j, double amplitude,
                    const SwimmerParams& params) {
  if (i < 0 || i > 1 || j < 0 || j > 1 || i == j) throw DomainError("loop pair must be (0,1)");
  Eigen::Vector2d c(center.xi1, center.xi2);
  if (amplitude == 0.0) return Stroke({{0.0, Eigen::VectorXd(c)}});
  auto path = square(Eigen::Vector2d::Zero(), amplitude);
  std::vector<Eigen::Vector2d> shapes;
  for (auto p : path) {
    Eigen::Vector2d s = c;
    s[i] += p[0];
    s[j] += p[1];
    shapes.push_back(s);
  }
  check_corners(center, shapes, params);
  std::vector<StrokeKnot> knots;
  for (std::size_t k = 0; k < shapes.size(); ++k) {
    knots.push_back({static_cast<double>(k) * std::abs(amplitude), Eigen::VectorXd(shapes[k])});
  }
  return Stroke(std::move(knots));
}

Plan plan_local(const ThreeSphereState& state0, const ThreeSphereState& target,
                const SwimmerParams& params, const PlannerOptions& opts) {
  swimmer::require_admissible(state0, params);
  swimmer::require_admissible(target, params);
  if (opts.budget < 0 || !(opts.tol > 0.0) || !(opts.trust_radius > 0.0) ||
      opts.steps_per_side < 1 || !(opts.loop_cap_fraction > 0.0) ||
      !(opts.offset_fraction > 0.0)) {
    throw DomainError("invalid planner options");
  }

  Plan plan;
  plan.start = state0;
  plan.target = target;
  plan.predicted = state0;
  plan.error = state_distance(state0, target);
  if (plan.error == 0.0) {
    plan.converged = true;
    plan.stroke = Stroke({{0.0, Eigen::VectorXd(Eigen::Vector2d(state0.xi1, state0.xi2))}});
    return plan;
  }

  const auto handles = liealg::three_sphere_handles(params, opts.wall);
  const RankReport rank = liealg::lie_algebra_rank(handles, state0.vector(), opts.depth,
                                                   opts.rank_tol);
  if (rank.dimension < 5) {
    throw NotLocallyControllableError(
        "Lie algebra rank " + std::to_string(rank.dimension) +
        " < 5 at the start state; with the swimmer axis perpendicular to the wall "
        "(theta = pi/2 mod pi) the orbit has dimension at most 3");
  }

  const Vector5 total = state_delta(target, state0);
  const double pose_dist = total.tail<3>().norm();
  const int n_legs = std::max(1, static_cast<int>(std::ceil(pose_dist / opts.trust_radius)));
  plan.legs = n_legs;

  ThreeSphereState here = state0;
  Stroke stroke;
  double t0 = 0.0;
  double dt = 0.0;
  for (int leg = 1; leg <= n_legs; ++leg) {
    ThreeSphereState waypoint = target;
    if (leg < n_legs) {
      const Vector5 w = state0.vector() + (static_cast<double>(leg) / n_legs) * total;
      waypoint = ThreeSphereState::from_vector(w);
    }
    const double leg_tol = leg < n_legs ? 10.0 * opts.tol : opts.tol;
    const int budget = std::max(0, opts.budget - plan.iterations);
    LegResult res = shoot(here, waypoint, params, opts, budget, leg_tol, t0, leg);
    plan.iterations += res.iterations;
    plan.refinements += res.refinements;
    plan.error_history.insert(plan.error_history.end(), res.history.begin(), res.history.end());
    plan.primitives.insert(plan.primitives.end(), res.primitives.begin(), res.primitives.end());
    stroke = stroke.then(res.stroke);
    t0 = stroke.duration();
    dt = res.dt;
    here = res.reached;
  }
  plan.stroke = stroke;

  if (plan.stroke.knots().size() >= 2) {
    IntegrateOptions io;
    io.dt = dt;
    const Trajectory tr = sim::integrate(state0, plan.stroke, params, opts.wall, io);
    plan.predicted = sim::three_sphere_state(tr, tr.states.size() - 1);
  }
  plan.error = state_distance(plan.predicted, target);
  plan.converged = plan.error <= opts.tol;
  return plan;
}

void write_plan_json(const Plan& plan, std::ostream& out) {
  auto vec = [](const Eigen::VectorXd& v) {
    std::string s = "[";
    for (Eigen::Index i = 0; i < v.size(); ++i) s += (i ? ", " : "") + io::num(v[i]);
    return s + "]";
  };
  out << "{\n";
  out << "  \"start\": " << vec(plan.start.vector()) << ",\n";
  out << "  \"target\": " << vec(plan.target.vector()) << ",\n";
  out << "  \"predicted\": " << vec(plan.predicted.vector()) << ",\n";
  out << "  \"error\": " << io::num(plan.error) << ",\n";
  out << "  \"converged\": " << (plan.converged ? "true" : "false") << ",\n";
  out << "  \"iterations\": " << plan.iterations << ",\n";
  out << "  \"legs\": " << plan.legs << ",\n";
  out << "  \"duration\": " << io::num(plan.stroke.duration()) << ",\n";
  out << "  \"primitives\": [";
  for (std::size_t i = 0; i < plan.primitives.size(); ++i) {
    const auto& p = plan.primitives[i];
    out << (i ? "," : "") << "\n    {\"kind\": \"" << kind_name(p.kind) << "\", \"leg\": " << p.leg
        << ", \"from\": " << vec(p.from) << ", \"to\": " << vec(p.to);
    if (p.kind == PlanPrimitive::Kind::loop) {
      out << ", \"area\": " << io::num(p.area) << ", \"side\": " << io::num(p.side)
          << ", \"repeats\": " << p.repeats;
    }
    out << ", \"t_start\": " << io::num(p.t_start) << ", \"t_end\": " << io::num(p.t_end)
        << ", \"knot_times\": " << vec(Eigen::Map<const Eigen::VectorXd>(
                                         p.knot_times.data(),
                                         static_cast<Eigen::Index>(p.knot_times.size())))
        << "}";
  }
  out << (plan.primitives.empty() ? "]\n" : "\n  ]\n");
  out << "}\n";
}

}  // namespace wallstokes::planner
