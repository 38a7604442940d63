#include <CLI11.hpp>

#include <cstdio>
#include <iostream>
#include <optional>
#include <string>

#include "roughlab/config.hpp"
#include "roughlab/pipeline.hpp"

using namespace roughlab;

int main(int argc, char** argv) {
  CLI::App app{"roughlab: rough singular integral and fixed-point experiments"};
  app.require_subcommand(1, 1);
  std::string config_path;
  std::optional<std::string> output_dir;
  std::optional<int> workers;
  for (const std::string& name : command_names()) {
    CLI::App* sub = app.add_subcommand(name, "run the " + name + " experiment described by a JSON config");
    sub->add_option("config", config_path, "experiment config (JSON)")->required()->check(CLI::ExistingFile);
    sub->add_option("-o,--output-dir", output_dir, std::string("output directory (default: config, then $") +
                                                       kOutputDirEnv + ", then ./" + kDefaultOutputDir + ")");
    sub->add_option("-j,--workers", workers, "worker threads (overrides the config)")->check(CLI::PositiveNumber);
  }
  CLI11_PARSE(app, argc, argv);
  const std::string command = app.get_subcommands().front()->get_name();

  try {
    ExperimentConfig cfg = load_config(config_path);
    if (to_string(cfg.command) != command)
      throw ConfigurationError("command: config names '" + to_string(cfg.command) + "' but '" + command +
                               "' was requested");
    const RunManifest manifest = run(cfg, RunOverrides{output_dir, workers});
    for (const CheckOutcome& c : manifest.checks)
      std::printf("%s %s%s%s\n", c.pass ? "PASS" : "FAIL", c.name.c_str(), c.detail.empty() ? "" : " : ",
                  c.detail.c_str());
    if (manifest.error) std::fprintf(stderr, "error: %s\n", manifest.error->c_str());
    std::printf("manifest %s/%s\n", manifest.output_dir.c_str(), kManifestFile);
    return exit_code(manifest);
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 2;
  }
}
