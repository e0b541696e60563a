#pragma once

// JSON scenario configuration shared by all CLI commands.

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "json.hpp"
#include "wallstokes/liealg.hpp"
#include "wallstokes/planner.hpp"
#include "wallstokes/sim.hpp"
#include "wallstokes/swimmer.hpp"

namespace wallstokes {

struct ScenarioConfig {
  SwimmerKind kind = SwimmerKind::three_sphere;
  SwimmerParams params;
  bool wall = true;
  ThreeSphereState three;
  FourSphereState four;

  struct Fields {
    bool rotlet = false;
  } fields;

  struct RankMap {
    bool present = false;
    liealg::RankGrid grid;
    int depth = 3;
    double tol = liealg::kRankTol;
  } rankmap;

  struct Simulate {
    bool present = false;
    std::vector<StrokeKnot> knots;
    bool reciprocal = false;  ///< append the reversed stroke
    double dt = 0.0;          ///< 0 means duration / 4096
  } simulate;

  struct PlanBlock {
    bool present = false;
    ThreeSphereState target;
    PlannerOptions options;
  } plan;

  struct Verify {
    std::uint64_t seed = 1;
    std::vector<std::string> suites;  ///< empty means all
  } verify;

  Stroke stroke() const;
};

/// Parses and validates a configuration. Throws ConfigError naming the
/// offending key path.
ScenarioConfig parse_config(const nlohmann::json& doc);
ScenarioConfig parse_config_text(const std::string& text);
ScenarioConfig load_config(const std::filesystem::path& path);

}  // namespace wallstokes

namespace wallstokes {

/// Names accepted in verify.suites, in execution order.
const std::vector<std::string>& verify_suite_names();

}  // namespace wallstokes
