#include "frontsim/cli.hpp"

#include <CLI11.hpp>

#include <iostream>

int main(int argc, char** argv) {
  using namespace frontsim::cli;
  CLI::App app{"frontsim: swelling-front simulator"};
  app.require_subcommand(1);

  Options opts;
  std::string suite;
  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--config", opts.config_path, "Config file");
    sub->add_option("--preset", opts.preset, "Built-in configuration");
    sub->add_option("--out", opts.out_dir, "Output directory");
  };
  auto* run = app.add_subcommand("run", "Run one simulation");
  add_common(run);
  auto* sweep = app.add_subcommand("sweep", "Run the Cartesian product of the sweep axes");
  add_common(sweep);
  sweep->add_option("--parallel", opts.parallel, "Concurrent runs")->check(CLI::PositiveNumber);
  auto* verify = app.add_subcommand("verify", "Run a verification study");
  verify->add_option("suite", suite, "mms | epsilon | alpha0 | bounds")->required();
  verify->add_option("--out", opts.out_dir, "Output directory");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitConfig;
  }

  if (*run) return cmd_run(opts, std::cout, std::cerr);
  if (*sweep) return cmd_sweep(opts, std::cout, std::cerr);
  return cmd_verify(suite, opts, std::cout, std::cerr);
}
