#include <CLI11.hpp>

#include <cstdio>
#include <cstdlib>
#include <iostream>
#include <string>
#include <vector>

#include "wcl/config.hpp"
#include "wcl/errors.hpp"
#include "wcl/pipeline.hpp"

namespace {

constexpr int kUsageError = 2;

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Wrinkled Legendrian cobordism pipeline"};
  app.require_subcommand(1, 1);
  app.fallthrough();

  std::string config_path;
  std::string out_dir;
  unsigned seed = 0;
  int jobs = -1;
  std::vector<std::string> tol_overrides;
  std::vector<std::string> settings;
  app.add_option("--config", config_path, "Config file (flat key = value)")->check(CLI::ExistingFile);
  app.add_option("--out", out_dir, "Output directory");
  auto* seed_opt = app.add_option("--seed", seed, "Random seed");
  app.add_option("--jobs", jobs, "Worker threads (0: all cores)")->check(CLI::NonNegativeNumber);
  app.add_option("--tol-override", tol_overrides, "Tolerance override KEY=VAL")->allow_extra_args(false);
  app.add_option("--set", settings, "Config override KEY=VAL")->allow_extra_args(false);

  app.add_subcommand("verify", "Run every stage and write verify_report.txt");
  app.add_subcommand("trace", "Trace the cobordism, write the mesh and trace_report.txt");
  auto* render = app.add_subcommand("render", "Write SVG figures");
  auto* sweep = app.add_subcommand("sweep", "Sweep one parameter and write sweep_<parameter>.txt");
  app.add_subcommand("report", "Summarize reports found in the output directory");

  std::string projection;
  render->add_option("--projection", projection, "Comma-separated projections (x1z, x2z, ux2)");
  std::string parameter;
  std::string values;
  sweep->add_option("--parameter", parameter, "g_cap, epsilon, delta or mesh");
  sweep->add_option("--values", values, "Comma-separated values");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kUsageError;
  }

  wcl::RunConfig cfg;
  try {
    if (!config_path.empty()) cfg = wcl::RunConfig::load(config_path);
    for (const auto& s : settings) {
      const auto eq = s.find('=');
      if (eq == std::string::npos) throw wcl::ConfigError("--set '" + s + "' is not KEY=VAL");
      cfg.set(s.substr(0, eq), s.substr(eq + 1));
    }
    for (const auto& t : tol_overrides) cfg.override_tolerance(t);
    if (const char* env = std::getenv("WCL_OUT"); env != nullptr && *env != '\0') cfg.out_dir = env;
    if (!out_dir.empty()) cfg.out_dir = out_dir;
    if (*seed_opt) cfg.seed = seed;
    if (jobs >= 0) cfg.jobs = jobs;
    if (!projection.empty()) cfg.set("render_projections", projection);
    if (!parameter.empty()) cfg.sweep_parameter = parameter;
    if (!values.empty()) cfg.set("sweep_values", values);
    cfg.validate();
  } catch (const wcl::ConfigError& e) {
    std::cerr << "wcl: " << e.what() << "\n";
    return kUsageError;
  }

  const std::string command = app.get_subcommands().front()->get_name();
  try {
    if (command == "verify") return wcl::cmd_verify(cfg);
    if (command == "trace") return wcl::cmd_trace(cfg);
    if (command == "render") return wcl::cmd_render(cfg);
    if (command == "sweep") return wcl::cmd_sweep(cfg);
    return wcl::cmd_report(cfg);
  } catch (const wcl::ConfigError& e) {
    std::cerr << "wcl: " << e.what() << "\n";
    return kUsageError;
  } catch (const wcl::DomainError& e) {
    std::cerr << "wcl: " << e.what() << "\n";
    return kUsageError;
  } catch (const std::exception& e) {
    std::cerr << "wcl: " << command << " failed: " << e.what() << "\n";
    return 1;
  }
}
