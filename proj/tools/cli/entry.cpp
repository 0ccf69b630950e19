#include <iostream>

#include <CLI11.hpp>

#include "gamow_cli.hpp"

namespace gamow::cli {

int main_entry(int argc, char** argv) {
  CLI::App app{"gamow: nonlocal isoperimetric energy experiments"};
  app.require_subcommand(1);
  auto* run_cmd = app.add_subcommand("run", "Run the experiment described by a JSON config");
  std::string config_path;
  RunFlags flags;
  run_cmd->add_option("config", config_path, "Config file (JSON)")->required();
  run_cmd->add_option("--out", flags.out, "Output directory");
  run_cmd->add_option("--threads", flags.threads, "Worker threads")->check(CLI::PositiveNumber);
  run_cmd->add_option("--dump-mesh-every", flags.dump_mesh_every, "Write the flow mesh every N steps")
      ->check(CLI::NonNegativeNumber);
  run_cmd->add_flag("--export-matrices", flags.export_matrices,
                    "Write S, K, M and Q as CSV (spectrum runs)");
  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? exit_ok : exit_config;
  }

  RunConfig config;
  try {
    config = load_config(config_path);
  } catch (const Error& e) {
    std::cerr << "gamow: config error: " << e.what() << '\n';
    return exit_config;
  }
  const auto dir = resolve_output_dir(config, flags, std::filesystem::path(config_path).stem().string());
  const RunOutcome outcome = run(config, flags, dir);
  switch (outcome.exit_code) {
    case exit_ok:
      std::cout << "gamow: " << config.kind << " done, outputs in " << dir.string() << '\n';
      break;
    case exit_config:
      std::cerr << "gamow: config error: " << outcome.message << '\n';
      break;
    case exit_numerical:
      std::cerr << "gamow: numerical failure: " << outcome.message << '\n';
      break;
    case exit_assertion:
      std::cerr << "gamow: assertion failed: " << outcome.message << '\n';
      break;
    default:
      break;
  }
  return outcome.exit_code;
}

}  // namespace gamow::cli
