#include "wallstokes/config.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

#include "wallstokes/errors.hpp"

namespace wallstokes {
namespace {

using nlohmann::json;

std::string join(const std::string& path, const std::string& key) {
  return path.empty() ? key : path + "." + key;
}

void expect_object(const json& j, const std::string& path,
                   std::initializer_list<const char*> allowed) {
  if (!j.is_object()) throw ConfigError(path + ": expected an object");
  for (auto it = j.begin(); it != j.end(); ++it) {
    const bool known = std::any_of(allowed.begin(), allowed.end(),
                                   [&](const char* k) { return it.key() == k; });
    if (!known) throw ConfigError(join(path, it.key()) + ": unknown key");
  }
}

const json& require(const json& j, const std::string& path, const char* key) {
  if (!j.contains(key)) throw ConfigError(join(path, key) + ": missing required key");
  return j.at(key);
}

double as_number(const json& j, const std::string& path) {
  if (!j.is_number()) throw ConfigError(path + ": expected a number");
  const double v = j.get<double>();
  if (!std::isfinite(v)) throw ConfigError(path + ": must be finite");
  return v;
}

double number(const json& j, const std::string& path, const char* key) {
  return as_number(require(j, path, key), join(path, key));
}

double number_or(const json& j, const std::string& path, const char* key, double fallback) {
  return j.contains(key) ? as_number(j.at(key), join(path, key)) : fallback;
}

int integer_or(const json& j, const std::string& path, const char* key, int fallback) {
  if (!j.contains(key)) return fallback;
  const auto& v = j.at(key);
  if (!v.is_number_integer()) throw ConfigError(join(path, key) + ": expected an integer");
  return v.get<int>();
}

bool boolean_or(const json& j, const std::string& path, const char* key, bool fallback) {
  if (!j.contains(key)) return fallback;
  const auto& v = j.at(key);
  if (!v.is_boolean()) throw ConfigError(join(path, key) + ": expected true or false");
  return v.get<bool>();
}

std::vector<double> numbers(const json& j, const std::string& path) {
  if (!j.is_array()) throw ConfigError(path + ": expected an array of numbers");
  std::vector<double> out;
  for (std::size_t i = 0; i < j.size(); ++i) {
    out.push_back(as_number(j[i], path + "[" + std::to_string(i) + "]"));
  }
  return out;
}

std::vector<double> axis(const json& j, const std::string& path) {
  if (j.is_array()) return numbers(j, path);
  expect_object(j, path, {"start", "stop", "num"});
  const double a = number(j, path, "start");
  const double b = number(j, path, "stop");
  const auto& nj = require(j, path, "num");
  if (!nj.is_number_integer() || nj.get<long>() < 0) {
    throw ConfigError(join(path, "num") + ": expected a non-negative integer");
  }
  const long n = nj.get<long>();
  std::vector<double> out;
  for (long i = 0; i < n; ++i) {
    out.push_back(n == 1 ? a : a + (b - a) * static_cast<double>(i) / static_cast<double>(n - 1));
  }
  return out;
}

ThreeSphereState three_state(const json& j, const std::string& path) {
  expect_object(j, path, {"xi1", "xi2", "x", "y", "theta"});
  ThreeSphereState s;
  s.xi1 = number(j, path, "xi1");
  s.xi2 = number(j, path, "xi2");
  s.x = number_or(j, path, "x", 0.0);
  s.y = number(j, path, "y");
  s.theta = number(j, path, "theta");
  return s;
}

FourSphereState four_state(const json& j, const std::string& path) {
  expect_object(j, path, {"xi", "c", "q"});
  FourSphereState s;
  const auto xi = numbers(require(j, path, "xi"), join(path, "xi"));
  if (xi.size() != 4) throw ConfigError(join(path, "xi") + ": expected 4 arm lengths");
  for (int i = 0; i < 4; ++i) s.xi[i] = xi[i];
  const auto c = numbers(require(j, path, "c"), join(path, "c"));
  if (c.size() != 3) throw ConfigError(join(path, "c") + ": expected 3 coordinates");
  s.c = Vec3(c[0], c[1], c[2]);
  if (j.contains("q")) {
    const auto q = numbers(j.at("q"), join(path, "q"));
    if (q.size() != 4) throw ConfigError(join(path, "q") + ": expected [w, x, y, z]");
    const Eigen::Quaterniond quat(q[0], q[1], q[2], q[3]);
    if (!(quat.norm() > 0.0)) throw ConfigError(join(path, "q") + ": zero quaternion");
    s.orient = quat.normalized();
  }
  return s;
}

void require_admissible(const std::vector<std::string>& v, const std::string& path) {
  if (v.empty()) return;
  std::string msg = path + ": inadmissible state";
  for (const auto& s : v) msg += "; " + s;
  throw ConfigError(msg);
}

}  // namespace

const std::vector<std::string>& verify_suite_names() {
  static const std::vector<std::string> names{
      "wall_noslip", "kernel_reciprocity", "lorentz_drag", "force_balance",
      "planar_confinement", "symmetry_S", "symmetry_T", "scallop"};
  return names;
}

Stroke ScenarioConfig::stroke() const {
  Stroke s(simulate.knots);
  return simulate.reciprocal ? s.then(s.reversed()) : s;
}

ScenarioConfig parse_config(const json& doc) {
  expect_object(doc, "config",
                {"swimmer", "params", "wall", "state", "fields", "rankmap", "simulate", "plan",
                 "verify"});
  ScenarioConfig cfg;

  const auto& kind = require(doc, "config", "swimmer");
  if (kind == "three_sphere") {
    cfg.kind = SwimmerKind::three_sphere;
  } else if (kind == "four_sphere") {
    cfg.kind = SwimmerKind::four_sphere;
  } else {
    throw ConfigError("config.swimmer: expected \"three_sphere\" or \"four_sphere\"");
  }

  const auto& params = require(doc, "config", "params");
  expect_object(params, "config.params", {"a", "mu"});
  cfg.params.a = number(params, "config.params", "a");
  cfg.params.fluid.mu = number_or(params, "config.params", "mu", 1.0);
  if (!(cfg.params.a > 0.0)) throw ConfigError("config.params.a: must be positive");
  if (!(cfg.params.fluid.mu > 0.0)) throw ConfigError("config.params.mu: must be positive");

  cfg.wall = boolean_or(doc, "config", "wall", true);

  const auto& state = require(doc, "config", "state");
  if (cfg.kind == SwimmerKind::three_sphere) {
    cfg.three = three_state(state, "config.state");
    require_admissible(swimmer::violations(cfg.three, cfg.params), "config.state");
  } else {
    cfg.four = four_state(state, "config.state");
    require_admissible(swimmer::violations(cfg.four, cfg.params), "config.state");
  }

  if (doc.contains("fields")) {
    const auto& f = doc.at("fields");
    expect_object(f, "config.fields", {"rotlet"});
    cfg.fields.rotlet = boolean_or(f, "config.fields", "rotlet", false);
    if (cfg.fields.rotlet && cfg.kind != SwimmerKind::three_sphere) {
      throw ConfigError("config.fields.rotlet: only available for the three-sphere swimmer");
    }
  }

  if (doc.contains("rankmap")) {
    const std::string p = "config.rankmap";
    const auto& r = doc.at("rankmap");
    expect_object(r, p, {"xi1", "xi2", "y", "theta", "depth", "tol"});
    if (cfg.kind != SwimmerKind::three_sphere) {
      throw ConfigError(p + ": rank maps are defined for the three-sphere swimmer");
    }
    cfg.rankmap.present = true;
    cfg.rankmap.grid.xi1.values = axis(require(r, p, "xi1"), p + ".xi1");
    cfg.rankmap.grid.xi2.values = axis(require(r, p, "xi2"), p + ".xi2");
    cfg.rankmap.grid.y.values = axis(require(r, p, "y"), p + ".y");
    cfg.rankmap.grid.theta.values = axis(require(r, p, "theta"), p + ".theta");
    cfg.rankmap.depth = integer_or(r, p, "depth", 3);
    cfg.rankmap.tol = number_or(r, p, "tol", liealg::kRankTol);
    if (cfg.rankmap.depth < 1 || cfg.rankmap.depth > 4) {
      throw ConfigError(p + ".depth: must be between 1 and 4");
    }
    if (!(cfg.rankmap.tol > 0.0) || cfg.rankmap.tol >= 1.0) {
      throw ConfigError(p + ".tol: must lie in (0, 1)");
    }
  }

  if (doc.contains("simulate")) {
    const std::string p = "config.simulate";
    const auto& s = doc.at("simulate");
    expect_object(s, p, {"knots", "reciprocal", "dt"});
    cfg.simulate.present = true;
    const auto& knots = require(s, p, "knots");
    if (!knots.is_array() || knots.size() < 2) {
      throw ConfigError(p + ".knots: expected at least two knots");
    }
    const std::size_t dim = cfg.kind == SwimmerKind::three_sphere ? 2 : 4;
    for (std::size_t i = 0; i < knots.size(); ++i) {
      const std::string kp = p + ".knots[" + std::to_string(i) + "]";
      expect_object(knots[i], kp, {"t", "xi"});
      StrokeKnot k;
      k.t = number(knots[i], kp, "t");
      const auto xi = numbers(require(knots[i], kp, "xi"), kp + ".xi");
      if (xi.size() != dim) {
        throw ConfigError(kp + ".xi: expected " + std::to_string(dim) + " arm lengths");
      }
      k.xi = Eigen::Map<const Eigen::VectorXd>(xi.data(), static_cast<Eigen::Index>(dim));
      if (i == 0 && k.t != 0.0) throw ConfigError(kp + ".t: the first knot must be at t = 0");
      if (i > 0 && !(k.t > cfg.simulate.knots.back().t)) {
        throw ConfigError(kp + ".t: knot times must strictly increase");
      }
      if (cfg.kind == SwimmerKind::three_sphere) {
        ThreeSphereState st = cfg.three;
        st.xi1 = xi[0];
        st.xi2 = xi[1];
        require_admissible(swimmer::violations(st, cfg.params), kp);
      } else {
        FourSphereState st = cfg.four;
        for (int a = 0; a < 4; ++a) st.xi[a] = xi[a];
        require_admissible(swimmer::violations(st, cfg.params), kp);
      }
      cfg.simulate.knots.push_back(std::move(k));
    }
    Eigen::VectorXd xi0(dim);
    if (cfg.kind == SwimmerKind::three_sphere) {
      xi0 << cfg.three.xi1, cfg.three.xi2;
    } else {
      xi0 << cfg.four.xi[0], cfg.four.xi[1], cfg.four.xi[2], cfg.four.xi[3];
    }
    if ((cfg.simulate.knots.front().xi - xi0).norm() > 1e-12 * (1.0 + xi0.norm())) {
      throw ConfigError(p + ".knots[0].xi: must equal the arm lengths of config.state");
    }
    cfg.simulate.reciprocal = boolean_or(s, p, "reciprocal", false);
    cfg.simulate.dt = number_or(s, p, "dt", 0.0);
    if (cfg.simulate.dt < 0.0) throw ConfigError(p + ".dt: must be positive");
  }

  if (doc.contains("plan")) {
    const std::string p = "config.plan";
    const auto& pl = doc.at("plan");
    expect_object(pl, p,
                  {"target", "budget", "tol", "trust_radius", "loop_cap_fraction",
                   "offset_fraction", "steps_per_side"});
    if (cfg.kind != SwimmerKind::three_sphere) {
      throw ConfigError(p + ": planning is available for the three-sphere swimmer only");
    }
    cfg.plan.present = true;
    cfg.plan.target = three_state(require(pl, p, "target"), p + ".target");
    require_admissible(swimmer::violations(cfg.plan.target, cfg.params), p + ".target");
    auto& o = cfg.plan.options;
    o.wall = cfg.wall;
    o.budget = integer_or(pl, p, "budget", o.budget);
    o.tol = number_or(pl, p, "tol", o.tol);
    o.trust_radius = number_or(pl, p, "trust_radius", o.trust_radius);
    o.loop_cap_fraction = number_or(pl, p, "loop_cap_fraction", o.loop_cap_fraction);
    o.offset_fraction = number_or(pl, p, "offset_fraction", o.offset_fraction);
    o.steps_per_side = integer_or(pl, p, "steps_per_side", o.steps_per_side);
    if (o.budget < 0) throw ConfigError(p + ".budget: must be non-negative");
    if (!(o.tol > 0.0)) throw ConfigError(p + ".tol: must be positive");
    if (!(o.trust_radius > 0.0)) throw ConfigError(p + ".trust_radius: must be positive");
    if (!(o.loop_cap_fraction > 0.0) || o.loop_cap_fraction > 0.2) {
      throw ConfigError(p + ".loop_cap_fraction: must lie in (0, 0.2]");
    }
    if (!(o.offset_fraction > 0.0) || o.offset_fraction >= 1.0) {
      throw ConfigError(p + ".offset_fraction: must lie in (0, 1)");
    }
    if (o.steps_per_side < 1) throw ConfigError(p + ".steps_per_side: must be at least 1");
  }

  if (doc.contains("verify")) {
    const std::string p = "config.verify";
    const auto& v = doc.at("verify");
    expect_object(v, p, {"seed", "suites"});
    if (v.contains("seed")) {
      if (!v.at("seed").is_number_unsigned()) {
        throw ConfigError(p + ".seed: expected a non-negative integer");
      }
      cfg.verify.seed = v.at("seed").get<std::uint64_t>();
    }
    if (v.contains("suites")) {
      const auto& s = v.at("suites");
      if (!s.is_array()) throw ConfigError(p + ".suites: expected an array of names");
      const auto& known = verify_suite_names();
      for (std::size_t i = 0; i < s.size(); ++i) {
        const std::string sp = p + ".suites[" + std::to_string(i) + "]";
        if (!s[i].is_string()) throw ConfigError(sp + ": expected a suite name");
        const auto name = s[i].get<std::string>();
        if (std::find(known.begin(), known.end(), name) == known.end()) {
          throw ConfigError(sp + ": unknown suite \"" + name + "\"");
        }
        cfg.verify.suites.push_back(name);
      }
    }
  }
  return cfg;
}

ScenarioConfig parse_config_text(const std::string& text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ConfigError(std::string("malformed JSON: ") + e.what());
  }
  return parse_config(doc);
}

ScenarioConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot open config file " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_config_text(ss.str());
}

}  // namespace wallstokes
