#include <cstdlib>
#include <iostream>
#include <string>

#include "CLI11.hpp"
#include "wallstokes/commands.hpp"

namespace {

int threads_from_env() {
  const char* env = std::getenv("WALLSTOKES_THREADS");
  if (!env || !*env) return 0;
  try {
    std::size_t pos = 0;
    const int n = std::stoi(env, &pos);
    if (pos != std::string(env).size() || n < 1) throw std::invalid_argument(env);
    return n;
  } catch (const std::exception&) {
    std::cerr << "error: WALLSTOKES_THREADS must be a positive integer, got \"" << env << "\"\n";
    std::exit(wallstokes::cli::kConfigError);
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Sphere-assembly swimmers near a no-slip wall"};
  app.require_subcommand(1);

  std::string config;
  std::string out_dir = ".";
  int threads = 0;

  const char* commands[][2] = {
      {"fields", "Numeric control fields, with series comparison in wall mode"},
      {"rankmap", "Lie algebra rank over a grid of states"},
      {"simulate", "Integrate a stroke and write the trajectory"},
      {"plan", "Plan a local stroke to a target state"},
      {"verify", "Run the property suites"},
  };
  for (const auto& c : commands) {
    auto* sub = app.add_subcommand(c[0], c[1]);
    sub->add_option("--config", config, "JSON scenario file")->required()->check(CLI::ExistingFile);
    sub->add_option("--out", out_dir, "Output directory")->capture_default_str();
    sub->add_option("--threads", threads, "Worker threads (default: WALLSTOKES_THREADS or all)")
        ->check(CLI::PositiveNumber);
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : wallstokes::cli::kConfigError;
  }

  if (threads == 0) threads = threads_from_env();

  wallstokes::cli::Context ctx;
  ctx.out_dir = out_dir;
  ctx.threads = threads;
  ctx.out = &std::cout;
  ctx.err = &std::cerr;
  return wallstokes::cli::run(app.get_subcommands().front()->get_name(), config, ctx);
}
