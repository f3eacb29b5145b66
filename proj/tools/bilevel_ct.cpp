// Command-line driver for the tomographic testbed: rasterize the phantom,
// simulate projections, run one reconstruction, or compare methods.

#include <cstdint>
#include <exception>
#include <iostream>
#include <string>

#include "CLI11.hpp"
#include "cli/commands.hpp"
#include "cli/config.hpp"

int main(int argc, char** argv) {
  CLI::App app{"Desk-scale tomographic testbed for bilevel reconstruction"};
  app.require_subcommand(1);

  std::string config_path;
  std::string out_dir;
  std::uint64_t seed = 0;

  const auto add_common = [&](CLI::App* sub) {
    sub->add_option("--config", config_path,
                    "Configuration file with sections [testbed] [problem] [solver] "
                    "[output]; defaults apply when omitted");
    sub->add_option("--seed", seed, "Override testbed.seed");
    sub->add_option("--out", out_dir, "Override output.directory");
    return sub;
  };

  add_common(app.add_subcommand("phantom", "Write the rasterized phantom"));
  add_common(app.add_subcommand("project", "Write clean and noisy sinograms"));
  add_common(app.add_subcommand(
      "reconstruct", "Run the configured solver; write trace and reconstruction"));
  add_common(app.add_subcommand(
      "compare", "Compare methods; write summary and phase-plane tables"));

  CLI11_PARSE(app, argc, argv);
  CLI::App* sub = app.get_subcommands().front();

  try {
    ctcli::ExperimentConfig config;
    if (sub->count("--config") > 0) config = ctcli::parse_config_file(config_path);
    if (sub->count("--seed") > 0) config.testbed.seed = seed;
    if (sub->count("--out") > 0) config.output.directory = out_dir;
    ctcli::validate(config);

    const std::string name = sub->get_name();
    if (name == "phantom") return ctcli::cmd_phantom(config);
    if (name == "project") return ctcli::cmd_project(config);
    if (name == "reconstruct") return ctcli::cmd_reconstruct(config);
    return ctcli::cmd_compare(config);
  } catch (const ctcli::ConfigError& e) {
    std::cerr << "configuration error: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
}
