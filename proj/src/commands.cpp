#include "wallstokes/commands.hpp"

#include <cmath>
#include <fstream>
#include <numbers>
#include <ostream>
#include <random>
#include <sstream>

#include "wallstokes/errors.hpp"
#include "wallstokes/greens.hpp"
#include "wallstokes/io.hpp"
#include "wallstokes/liealg.hpp"
#include "wallstokes/planner.hpp"
#include "wallstokes/series.hpp"
#include "wallstokes/sim.hpp"

namespace wallstokes::cli {
namespace {

using io::num;
constexpr double kPi = std::numbers::pi;

std::ofstream open_out(const Context& ctx, const std::string& name) {
  std::filesystem::create_directories(ctx.out_dir);
  std::ofstream f(ctx.out_dir / name, std::ios::binary | std::ios::trunc);
  if (!f) throw ConfigError("cannot write " + (ctx.out_dir / name).string());
  return f;
}

// Writes `text` to out_dir/name and echoes it to the report stream.
void emit(const Context& ctx, const std::string& name, const std::string& text, bool echo = true) {
  auto f = open_out(ctx, name);
  f << text;
  if (echo && ctx.out) *ctx.out << text;
}

Eigen::VectorXd shape_of(const ScenarioConfig& cfg) {
  if (cfg.kind == SwimmerKind::three_sphere) return Eigen::Vector2d(cfg.three.xi1, cfg.three.xi2);
  return Eigen::Vector4d(cfg.four.xi[0], cfg.four.xi[1], cfg.four.xi[2], cfg.four.xi[3]);
}

// Out-and-back stroke over an L-shaped path in the first two (or three) arms.
Stroke default_reciprocal_stroke(const ScenarioConfig& cfg) {
  const Eigen::VectorXd xi0 = shape_of(cfg);
  const double step = 0.2 * xi0.minCoeff();
  std::vector<Eigen::VectorXd> path{xi0};
  for (Eigen::Index k = 0; k < std::min<Eigen::Index>(xi0.size(), 3); ++k) {
    Eigen::VectorXd next = path.back();
    next[k] += step;
    path.push_back(next);
  }
  const Stroke out = Stroke::through(path, 1.0);
  return out.then(out.reversed());
}

Trajectory integrate_config(const ScenarioConfig& cfg, const Stroke& stroke, double dt) {
  IntegrateOptions opts;
  opts.dt = dt;
  opts.fields.rotlet = cfg.fields.rotlet;
  if (cfg.kind == SwimmerKind::three_sphere) {
    return sim::integrate(cfg.three, stroke, cfg.params, cfg.wall, opts);
  }
  return sim::integrate(cfg.four, stroke, cfg.params, cfg.wall, opts);
}

// ---- verify suites ---------------------------------------------------------

VerifyResult check(const std::string& name, const std::string& thr, double value) {
  VerifyResult r;
  r.name = name;
  r.threshold = thr;
  r.value = value;
  r.pass = value < std::stod(thr);
  return r;
}

VerifyResult skipped(const std::string& name, const std::string& why) {
  VerifyResult r;
  r.name = name;
  r.skipped = true;
  r.pass = true;
  r.note = why;
  return r;
}

VerifyResult suite_wall_noslip(const ScenarioConfig& cfg) {
  std::mt19937_64 rng(cfg.verify.seed);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  std::uniform_real_distribution<double> h(0.05, 5.0);
  double worst = 0.0;
  for (int s = 0; s < 100; ++s) {
    const Vec3 r0(5.0 * u(rng), h(rng), 5.0 * u(rng));
    const Vec3 f(u(rng), u(rng), u(rng));
    for (int w = 0; w < 100; ++w) {
      const Vec3 r(10.0 * u(rng), 0.0, 10.0 * u(rng));
      const Vec3 v = greens::blake_tensor(r, r0, cfg.params.fluid) * f;
      const double scale = (greens::stokeslet(r - r0, cfg.params.fluid) * f).norm();
      worst = std::max(worst, v.norm() / scale);
    }
  }
  return check("wall_noslip_velocity", "1e-12", worst);
}

VerifyResult suite_reciprocity(const ScenarioConfig& cfg) {
  std::mt19937_64 rng(cfg.verify.seed + 1);
  std::uniform_real_distribution<double> u(-3.0, 3.0);
  std::uniform_real_distribution<double> h(0.05, 3.0);
  double worst = 0.0;
  for (int k = 0; k < 200; ++k) {
    const Vec3 r(u(rng), h(rng), u(rng));
    const Vec3 r0(u(rng), h(rng), u(rng));
    const Tensor3 a = greens::blake_tensor(r, r0, cfg.params.fluid);
    const Tensor3 b = greens::blake_tensor(r0, r, cfg.params.fluid);
    worst = std::max(worst, (a - b.transpose()).norm() / a.norm());
  }
  return check("kernel_reciprocity", "1e-12", worst);
}

VerifyResult suite_lorentz(const ScenarioConfig& cfg) {
  double worst = 0.0;
  for (double eps : {0.01, 0.02, 0.05}) {
    const double a = cfg.params.a;
    const double y = a / eps;
    const Tensor3 corr =
        Tensor3::Identity() - 6.0 * kPi * cfg.params.fluid.mu * a *
                                  greens::self_image(Vec3(0.0, y, 0.0), cfg.params.fluid);
    const double par = std::abs(corr(0, 0) / (1.0 + 9.0 / 16.0 * eps) - 1.0);
    const double perp = std::abs(corr(1, 1) / (1.0 + 9.0 / 8.0 * eps) - 1.0);
    worst = std::max({worst, par / (eps * eps), perp / (eps * eps)});
  }
  return check("lorentz_drag_error_over_eps2", "2", worst);
}

double balance_residual(const ResistanceAssembly& as, const Eigen::VectorXd& rate,
                        const SwimmerParams& params, bool planar) {
  const Eigen::VectorXd u = as.T * rate.tail(as.T.cols()) + as.U * rate.head(as.U.cols());
  const auto f = swimmer::sphere_forces(as, u, params);
  const Vec3 ref = planar ? as.positions[1] : Vec3::Zero();
  Vec3 force = Vec3::Zero(), torque = Vec3::Zero();
  double scale = 0.0;
  for (std::size_t i = 0; i < f.size(); ++i) {
    force += f[i];
    torque += (as.positions[i] - ref).cross(f[i]);
    scale += f[i].norm() * (1.0 + (as.positions[i] - ref).norm());
  }
  if (planar) return std::max({std::abs(force.x()), std::abs(force.y()), std::abs(torque.z())}) / scale;
  return std::max(force.norm(), torque.norm()) / scale;
}

VerifyResult suite_force_balance(const ScenarioConfig& cfg) {
  double worst = 0.0;
  if (cfg.kind == SwimmerKind::three_sphere) {
    const auto as = swimmer::three_sphere_assembly(cfg.three, cfg.params, cfg.wall);
    const auto f = swimmer::three_sphere_fields(cfg.three, cfg.params, cfg.wall);
    for (const auto& v : f) worst = std::max(worst, balance_residual(as, v, cfg.params, true));
  } else {
    const auto as = swimmer::four_sphere_assembly(cfg.four, cfg.params, cfg.wall);
    const auto f = swimmer::four_sphere_fields(cfg.four, cfg.params, cfg.wall);
    // Torque about the center c for the four-sphere swimmer.
    ResistanceAssembly shifted = as;
    for (auto& p : shifted.positions) p -= cfg.four.c;
    for (const auto& v : f) worst = std::max(worst, balance_residual(shifted, v, cfg.params, false));
  }
  return check("force_balance_residual", "1e-10", worst);
}

VerifyResult suite_planar(const ScenarioConfig& cfg) {
  if (cfg.kind != SwimmerKind::three_sphere) return skipped("planar_confinement", "three-sphere only");
  const auto as = swimmer::three_sphere_assembly(cfg.three, cfg.params, cfg.wall);
  const auto f = swimmer::three_sphere_fields(cfg.three, cfg.params, cfg.wall);
  double worst = 0.0;
  for (const auto& v : f) {
    const Eigen::VectorXd u = as.T * v.tail<3>() + as.U * v.head<2>();
    const auto forces = swimmer::sphere_forces(as, u, cfg.params);
    Vec3 force = Vec3::Zero(), torque = Vec3::Zero();
    double scale = 0.0;
    for (std::size_t i = 0; i < forces.size(); ++i) {
      const Vec3 r = as.positions[i] - as.positions[1];
      force += forces[i];
      torque += r.cross(forces[i]);
      scale += forces[i].norm() * (1.0 + r.norm());
      worst = std::max(worst, std::abs(u[3 * static_cast<Eigen::Index>(i) + 2]));
    }
    worst = std::max({worst, std::abs(force.z()) / scale, std::abs(torque.x()) / scale,
                      std::abs(torque.y()) / scale});
  }
  return check("planar_out_of_plane_residual", "1e-10", worst);
}

Eigen::Matrix<double, 5, 5> sym_S() {
  Eigen::Matrix<double, 5, 5> s = Eigen::Matrix<double, 5, 5>::Zero();
  s(0, 1) = s(1, 0) = 1.0;
  s(2, 2) = -1.0;
  s(3, 3) = 1.0;
  s(4, 4) = -1.0;
  return s;
}

Eigen::Matrix<double, 5, 5> sym_T() {
  Eigen::Matrix<double, 5, 1> d;
  d << 1.0, 1.0, -1.0, 1.0, -1.0;
  return d.asDiagonal();
}

VerifyResult suite_symmetry_S(const ScenarioConfig& cfg) {
  if (cfg.kind != SwimmerKind::three_sphere) return skipped("symmetry_S", "three-sphere only");
  const auto& s = cfg.three;
  const auto f = swimmer::three_sphere_fields(s, cfg.params, cfg.wall);
  const ThreeSphereState m{s.xi2, s.xi1, s.x, s.y, 2.0 * kPi - s.theta};
  const auto g = swimmer::three_sphere_fields(m, cfg.params, cfg.wall);
  const double e1 = (f[0] - sym_S() * g[1]).norm() / f[0].norm();
  const double e2 = (f[1] - sym_S() * g[0]).norm() / f[1].norm();
  return check("symmetry_S_field_residual", "1e-10", std::max(e1, e2));
}

VerifyResult suite_symmetry_T(const ScenarioConfig& cfg) {
  if (cfg.kind != SwimmerKind::three_sphere) return skipped("symmetry_T", "three-sphere only");
  const auto& s = cfg.three;
  const auto f = swimmer::three_sphere_fields(s, cfg.params, cfg.wall);
  const ThreeSphereState m{s.xi1, s.xi2, s.x, s.y, kPi - s.theta};
  const auto g = swimmer::three_sphere_fields(m, cfg.params, cfg.wall);
  const double e1 = (f[0] - sym_T() * g[0]).norm() / f[0].norm();
  const double e2 = (f[1] - sym_T() * g[1]).norm() / f[1].norm();
  return check("symmetry_T_field_residual", "1e-10", std::max(e1, e2));
}

VerifyResult suite_scallop(const ScenarioConfig& cfg) {
  Stroke out = cfg.simulate.present ? Stroke(cfg.simulate.knots) : Stroke();
  Stroke stroke = cfg.simulate.present ? out.then(out.reversed()) : default_reciprocal_stroke(cfg);
  const Trajectory tr = integrate_config(cfg, stroke, stroke.duration() / 1e4);
  return check("scallop_net_displacement", "1e-8", sim::net_displacement(tr).norm());
}

std::string csv_row(std::initializer_list<std::string> cells) {
  std::string s;
  bool first = true;
  for (const auto& c : cells) {
    if (!first) s += ',';
    s += c;
    first = false;
  }
  return s + '\n';
}

}  // namespace

std::vector<VerifyResult> run_verify(const ScenarioConfig& cfg) {
  const auto& names = cfg.verify.suites.empty() ? verify_suite_names() : cfg.verify.suites;
  std::vector<VerifyResult> out;
  for (const auto& n : names) {
    if (n == "wall_noslip") out.push_back(suite_wall_noslip(cfg));
    else if (n == "kernel_reciprocity") out.push_back(suite_reciprocity(cfg));
    else if (n == "lorentz_drag") out.push_back(suite_lorentz(cfg));
    else if (n == "force_balance") out.push_back(suite_force_balance(cfg));
    else if (n == "planar_confinement") out.push_back(suite_planar(cfg));
    else if (n == "symmetry_S") out.push_back(suite_symmetry_S(cfg));
    else if (n == "symmetry_T") out.push_back(suite_symmetry_T(cfg));
    else if (n == "scallop") out.push_back(suite_scallop(cfg));
  }
  return out;
}

int cmd_fields(const ScenarioConfig& cfg, const Context& ctx) {
  std::ostringstream csv;
  if (cfg.kind == SwimmerKind::four_sphere) {
    const auto f = swimmer::four_sphere_fields(cfg.four, cfg.params, cfg.wall);
    csv << "field,component,numeric\n";
    for (int k = 0; k < 4; ++k) {
      for (int c = 0; c < 10; ++c) {
        csv << csv_row({std::to_string(k + 1), std::to_string(c + 1), num(f[k][c])});
      }
    }
  } else {
    FieldOptions opts;
    opts.rotlet = cfg.fields.rotlet;
    const auto& s = cfg.three;
    const auto f = swimmer::three_sphere_fields(s, cfg.params, cfg.wall, opts);
    if (cfg.wall) {
      const auto ser = series::series_fields(s.xi1, s.xi2, s.y, s.theta, cfg.params.a);
      const double a = cfg.params.a;
      const double budget = a * a + a / std::pow(s.y, 5);
      csv << "field,component,numeric,series,deviation,budget\n";
      for (int k = 0; k < 2; ++k) {
        for (int c = 0; c < 5; ++c) {
          const double dev = std::abs(f[k][c] - ser[k].value[c]);
          csv << csv_row({std::to_string(k + 1), std::to_string(c + 1), num(f[k][c]),
                          num(ser[k].value[c]), num(dev), num(budget)});
        }
      }
    } else {
      csv << "field,component,numeric\n";
      for (int k = 0; k < 2; ++k) {
        for (int c = 0; c < 5; ++c) {
          csv << csv_row({std::to_string(k + 1), std::to_string(c + 1), num(f[k][c])});
        }
      }
    }
  }
  emit(ctx, "fields.csv", csv.str());
  return kOk;
}

int cmd_rankmap(const ScenarioConfig& cfg, const Context& ctx) {
  if (!cfg.rankmap.present) throw ConfigError("config.rankmap: required by the rankmap command");
  const auto rows = liealg::rank_map(cfg.rankmap.grid, cfg.params, cfg.wall, cfg.rankmap.depth,
                                     cfg.rankmap.tol, ctx.threads);
  std::ostringstream csv;
  csv << "xi1,xi2,y,theta,dim,sigma_min_ratio\n";
  int flagged = 0;
  for (const auto& r : rows) {
    csv << csv_row({num(r.xi1), num(r.xi2), num(r.y), num(r.theta), std::to_string(r.dimension),
                    num(r.sigma_min_ratio)});
    if (r.dimension < 0) {
      ++flagged;
      if (ctx.err) {
        *ctx.err << "inadmissible grid point (" << num(r.xi1) << ", " << num(r.xi2) << ", "
                 << num(r.y) << ", " << num(r.theta) << "): " << r.error << '\n';
      }
    }
  }
  emit(ctx, "rankmap.csv", csv.str(), false);
  if (ctx.out) {
    *ctx.out << "rankmap: " << rows.size() << " points, " << flagged << " inadmissible -> "
             << (ctx.out_dir / "rankmap.csv").string() << '\n';
  }
  return kOk;
}

int cmd_simulate(const ScenarioConfig& cfg, const Context& ctx) {
  if (!cfg.simulate.present) throw ConfigError("config.simulate: required by the simulate command");
  const Trajectory tr = integrate_config(cfg, cfg.stroke(), cfg.simulate.dt);
  std::ostringstream csv;
  sim::write_csv(tr, csv);
  emit(ctx, "trajectory.csv", csv.str(), false);
  if (ctx.out) {
    const Eigen::VectorXd d = sim::net_displacement(tr);
    *ctx.out << "steps: " << tr.steps << '\n' << "net_displacement:";
    for (Eigen::Index k = 0; k < d.size(); ++k) *ctx.out << ' ' << num(d[k]);
    *ctx.out << '\n';
  }
  return kOk;
}

int cmd_plan(const ScenarioConfig& cfg, const Context& ctx) {
  if (!cfg.plan.present) throw ConfigError("config.plan: required by the plan command");
  const Plan plan = planner::plan_local(cfg.three, cfg.plan.target, cfg.params, cfg.plan.options);
  std::ostringstream js;
  planner::write_plan_json(plan, js);
  emit(ctx, "plan.json", js.str(), false);

  // Independent check of the plan at half the planning step.
  double verify_error = plan.error;
  if (plan.stroke.knots().size() >= 2) {
    IntegrateOptions io;
    io.dt = 0.5 / cfg.plan.options.steps_per_side;
    const Trajectory tr = sim::integrate(cfg.three, plan.stroke, cfg.params, cfg.wall, io);
    std::ostringstream csv;
    sim::write_csv(tr, csv);
    emit(ctx, "plan_trajectory.csv", csv.str(), false);
    verify_error = planner::state_distance(sim::three_sphere_state(tr, tr.states.size() - 1),
                                           cfg.plan.target);
  }
  if (ctx.out) {
    *ctx.out << "plan_error: " << num(plan.error) << '\n'
             << "verified_error: " << num(verify_error) << '\n'
             << "iterations: " << plan.iterations << '\n'
             << "legs: " << plan.legs << '\n'
             << "primitives: " << plan.primitives.size() << '\n'
             << "plan_converged: " << (plan.converged ? "PASS" : "FAIL") << '\n';
  }
  return plan.converged ? kOk : kFailed;
}

int cmd_verify(const ScenarioConfig& cfg, const Context& ctx) {
  const auto results = run_verify(cfg);
  std::ostringstream report, csv;
  csv << "suite,value,threshold,status\n";
  std::vector<std::string> failed;
  for (const auto& r : results) {
    if (r.skipped) {
      report << r.name << ": SKIP (" << r.note << ")\n";
      csv << csv_row({r.name, "", "", "SKIP"});
      continue;
    }
    report << r.name << " < " << r.threshold << ": " << (r.pass ? "PASS" : "FAIL") << '\n';
    csv << csv_row({r.name, num(r.value), r.threshold, r.pass ? "PASS" : "FAIL"});
    if (!r.pass) failed.push_back(r.name);
  }
  emit(ctx, "verify.txt", report.str());
  emit(ctx, "verify.csv", csv.str(), false);
  if (!failed.empty() && ctx.err) {
    *ctx.err << "failed:";
    for (const auto& f : failed) *ctx.err << ' ' << f;
    *ctx.err << '\n';
  }
  return failed.empty() ? kOk : kFailed;
}

int run(const std::string& command, const std::filesystem::path& config, const Context& ctx) {
  try {
    const ScenarioConfig cfg = load_config(config);
    if (command == "fields") return cmd_fields(cfg, ctx);
    if (command == "rankmap") return cmd_rankmap(cfg, ctx);
    if (command == "simulate") return cmd_simulate(cfg, ctx);
    if (command == "plan") return cmd_plan(cfg, ctx);
    if (command == "verify") return cmd_verify(cfg, ctx);
    throw ConfigError("unknown command \"" + command + "\"");
  } catch (const ConfigError& e) {
    if (ctx.err) *ctx.err << "error: config: " << e.what() << '\n';
    return kConfigError;
  } catch (const NotLocallyControllableError& e) {
    if (ctx.err) *ctx.err << "error: not_locally_controllable: " << e.what() << '\n';
    return kRuntimeError;
  } catch (const Error& e) {
    if (ctx.err) *ctx.err << "error: " << e.what() << '\n';
    return kRuntimeError;
  } catch (const std::filesystem::filesystem_error& e) {
    if (ctx.err) *ctx.err << "error: io: " << e.what() << '\n';
    return kRuntimeError;
  }
}

}  // namespace wallstokes::cli
