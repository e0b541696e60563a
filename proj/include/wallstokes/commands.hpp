#pragma once

// CLI command implementations. Each returns a process exit code.

#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

#include "wallstokes/config.hpp"

namespace wallstokes::cli {

enum ExitCode : int {
  kOk = 0,
  kFailed = 1,       ///< verification failure or unconverged plan
  kConfigError = 2,  ///< bad command line or configuration
  kRuntimeError = 3, ///< computation error (inadmissible stroke, singular system, ...)
};

struct Context {
  std::filesystem::path out_dir = ".";
  int threads = 1;
  std::ostream* out = nullptr;  ///< human-readable report (stdout)
  std::ostream* err = nullptr;  ///< diagnostics (stderr)
};

struct VerifyResult {
  std::string name;
  std::string threshold;  ///< as printed, e.g. "1e-8"
  double value = 0.0;
  bool pass = false;
  bool skipped = false;
  std::string note;
};

int cmd_fields(const ScenarioConfig& cfg, const Context& ctx);
int cmd_rankmap(const ScenarioConfig& cfg, const Context& ctx);
int cmd_simulate(const ScenarioConfig& cfg, const Context& ctx);
int cmd_plan(const ScenarioConfig& cfg, const Context& ctx);
int cmd_verify(const ScenarioConfig& cfg, const Context& ctx);

/// Runs every requested suite (all when cfg.verify.suites is empty).
std::vector<VerifyResult> run_verify(const ScenarioConfig& cfg);

/// Loads the config, dispatches and maps exceptions to exit codes.
int run(const std::string& command, const std::filesystem::path& config, const Context& ctx);

}  // namespace wallstokes::cli
