#include <CLI11.hpp>
#include <iostream>

#include "mats/cli.hpp"

int main(int argc, char** argv) {
  CLI::App app{"mats: continuation solver and hypothesis checks for Monge-Ampere type equations"};
  app.require_subcommand(1);

  std::string config_path, out_dir, formats;
  long long seed = -1;

  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--config", config_path, "configuration file")->required();
    sub->add_option("--out", out_dir, "output directory (overrides [output] dir)");
    sub->add_option("--seed", seed, "sampling seed (overrides config)");
    sub->add_option("--format", formats, "comma-separated output formats: csv,vtk");
  };

  CLI::App* solve = app.add_subcommand("solve", "run the continuation solver");
  CLI::App* verify = app.add_subcommand("verify", "run the hypothesis checks");
  CLI::App* study = app.add_subcommand("study", "manufactured-solution convergence study");
  CLI::App* transport = app.add_subcommand("transport", "solve and report the transport residual");
  for (CLI::App* sub : {solve, verify, study, transport}) add_common(sub);

  CLI11_PARSE(app, argc, argv);

  try {
    mats::RunConfig cfg = mats::parse_config_file(config_path);
    if (!out_dir.empty()) cfg.out_dir = out_dir;
    if (seed >= 0) cfg.seed = static_cast<std::uint64_t>(seed);
    if (!formats.empty()) {
      cfg.csv = formats.find("csv") != std::string::npos;
      cfg.vtk = formats.find("vtk") != std::string::npos;
    }
    if (solve->parsed()) return mats::cmd_solve(cfg);
    if (verify->parsed()) return mats::cmd_verify(cfg);
    if (study->parsed()) return mats::cmd_study(cfg);
    if (transport->parsed()) return mats::cmd_transport(cfg);
  } catch (const mats::ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return mats::kConfigError;
  } catch (const mats::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return mats::kStalled;
  }
  return 0;
}
