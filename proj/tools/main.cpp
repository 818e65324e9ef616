// SPDX-License-Identifier: Apache-2.0
//
// Benchmark driver: runs the fast contour-quadrature time stepper against
// plain sequential stepping, sweeps solve counts, and tabulates quadrature
// error against its a-priori bound.

#include <exception>
#include <fstream>
#include <iostream>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "fastrk/cli/commands.hpp"
#include "fastrk/cli/config.hpp"
#include "fastrk/types.hpp"

namespace {

using fastrk::cli::RunConfig;

struct CommonArgs {
  std::optional<std::string> config_path;
  std::optional<std::string> profile;
};

void add_common(CLI::App* cmd, CommonArgs& args) {
  cmd->add_option("--config", args.config_path,
                  "JSON config file (overrides the profile)");
  cmd->add_option("--profile", args.profile, "named preset (reference)");
}

RunConfig resolve_config(const CommonArgs& args) {
  RunConfig cfg =
      args.profile ? RunConfig::profile(*args.profile) : RunConfig{};
  if (args.config_path) cfg = fastrk::cli::load_config_file(*args.config_path);
  return cfg;
}

/// Returns an owning stream for --out, or null to mean stdout.
std::unique_ptr<std::ofstream> open_out(const std::optional<std::string>& path) {
  if (!path) return nullptr;
  auto f = std::make_unique<std::ofstream>(*path);
  if (!*f) throw fastrk::ConfigError("cannot open output file: " + *path);
  return f;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"fast Runge-Kutta stepping for stiff linear systems"};
  app.require_subcommand(1);

  CommonArgs run_args, bench_args, quad_args, print_args;
  std::vector<int> n_list;
  std::optional<std::string> bench_out, quad_out;

  CLI::App* run = app.add_subcommand(
      "run", "solve once, compare with sequential stepping");
  add_common(run, run_args);

  CLI::App* bench = app.add_subcommand(
      "bench-solves", "CSV of solver-call counts versus step count");
  add_common(bench, bench_args);
  bench->add_option("--n-list", n_list, "step counts to sweep, comma separated")
      ->delimiter(',');
  bench->add_option("--out", bench_out, "write CSV here instead of stdout");

  CLI::App* quad = app.add_subcommand(
      "quaderr", "CSV of measured quadrature error versus its bound");
  add_common(quad, quad_args);
  quad->add_option("--out", quad_out, "write CSV here instead of stdout");

  CLI::App* print =
      app.add_subcommand("print-config", "echo the resolved config as JSON");
  add_common(print, print_args);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : 2;
  }

  try {
    if (run->parsed()) {
      fastrk::cli::cmd_run(resolve_config(run_args), std::cout);
    } else if (bench->parsed()) {
      auto f = open_out(bench_out);
      fastrk::cli::cmd_bench_solves(resolve_config(bench_args), n_list,
                                    f ? *f : std::cout);
    } else if (quad->parsed()) {
      auto f = open_out(quad_out);
      fastrk::cli::cmd_quaderr(resolve_config(quad_args), f ? *f : std::cout);
    } else if (print->parsed()) {
      std::cout << fastrk::cli::serialize_config(resolve_config(print_args));
    }
  } catch (const fastrk::ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  } catch (const fastrk::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  } catch (const std::invalid_argument& e) {
    std::cerr << "usage error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "unexpected error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
