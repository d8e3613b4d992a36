#include <iostream>

#include "CLI11.hpp"
#include "pblab/cli/runner.hpp"

int main(int argc, char** argv) {
  CLI::App app{"Present-bias goal pursuit experiments"};
  pblab::cli::Invocation inv;
  std::string output;
  std::string format;
  app.add_option("command", inv.command,
                 "trajectory | goal-opt | schedule-opt | verify | discount-plot")
      ->required();
  app.add_option("--config", inv.config_path, "Experiment config (JSON)")
      ->required();
  app.add_option("--output", output, "Write to PATH instead of stdout");
  app.add_option("--format", format, "csv or json (overrides the config)");
  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? 0 : pblab::cli::kExitInput;
  }
  if (!output.empty()) inv.output = output;
  if (!format.empty()) inv.format = format;
  return pblab::cli::execute(inv, std::cout, std::cerr);
}
