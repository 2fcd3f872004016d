#pragma once

#include <algorithm>
#include <exception>
#include <ostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "betaflow/commands.hpp"
#include "betaflow/config.hpp"
#include "betaflow/errors.hpp"

namespace betaflow {

/// Command-line entry point: subcommands evaluate / verify / characteristics /
/// converge, each taking --config, --out, --tolerance and --sign. Exit codes:
/// 0 = PASS, 1 = verification FAIL, 2 = config or usage error.
inline int run_cli(std::vector<std::string> args, std::ostream& out, std::ostream& err) {
  CLI::App app{"closed-form stratified flow evaluation and verification on the beta plane"};
  app.name("betaflow");
  app.require_subcommand(1);

  std::string config_path;
  CliOptions options;
  std::string sign_text;
  double tolerance = 0.0;

  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--config", config_path, "config file path")->required();
    sub->add_option("--out", options.out_dir, "output directory (default: current)");
    sub->add_option("--tolerance", tolerance, "relative residual tolerance override");
    sub->add_option("--sign", sign_text, "vertical-coefficient sign convention")
        ->check(CLI::IsMember({"paper", "oracle"}));
  };

  CLI::App* c_evaluate = app.add_subcommand("evaluate", "export flow and pressure over the grid");
  CLI::App* c_verify = app.add_subcommand("verify", "check the solution against every equation");
  CLI::App* c_characteristics =
      app.add_subcommand("characteristics", "integrate characteristic curves and check invariants");
  CLI::App* c_converge =
      app.add_subcommand("converge", "layered-pressure convergence study for a surface family");
  for (CLI::App* sub : {c_evaluate, c_verify, c_characteristics, c_converge}) add_common(sub);

  try {
    std::reverse(args.begin(), args.end());
    app.parse(args);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? 0 : 2;
  }

  try {
    const RunConfig cfg = load_run_config(config_path);
    for (CLI::App* sub : {c_evaluate, c_verify, c_characteristics, c_converge}) {
      if (sub->parsed()) {
        if (sub->count("--tolerance") > 0) options.tolerance = tolerance;
        if (sub->count("--sign") > 0) {
          options.sign = sign_text == "paper" ? SignConvention::paper : SignConvention::oracle;
        }
      }
    }
    if (c_evaluate->parsed()) return cmd_evaluate(cfg, options, out, err);
    if (c_verify->parsed()) return cmd_verify(cfg, options, out, err);
    if (c_characteristics->parsed()) return cmd_characteristics(cfg, options, out, err);
    if (c_converge->parsed()) return cmd_converge(cfg, options, out, err);
    err << "no subcommand selected\n";
    return 2;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return 2;
  }
}

inline int run_cli(int argc, char** argv, std::ostream& out, std::ostream& err) {
  std::vector<std::string> args;
  args.reserve(static_cast<std::size_t>(argc > 0 ? argc - 1 : 0));
  for (int i = 1; i < argc; ++i) args.emplace_back(argv[i]);
  return run_cli(std::move(args), out, err);
}

}  // namespace betaflow
