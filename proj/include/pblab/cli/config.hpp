#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "pblab/discount.hpp"
#include "pblab/oracle.hpp"
#include "pblab/trajectory.hpp"

namespace pblab::cli {

enum class Command { Trajectory, GoalOpt, ScheduleOpt, Verify, DiscountPlot };
enum class Format { Csv, Json };

std::string_view to_string(Command command);
/// Throws ConfigError("command") for unknown names.
Command parse_command(std::string_view name);
/// Throws ConfigError("format") for anything other than csv or json.
Format parse_format(std::string_view name);

struct FamilySpec {
  DiscountFamily family = DiscountFamily::Exponential;
  double k = 1.0;
};

struct ExperimentConfig {
  Command command = Command::Trajectory;
  TaskSpec task;
  FamilySpec discount;
  double alpha = 2.0;
  std::optional<OracleConfig> oracle;
  Format format = Format::Csv;
  /// Empty means stdout.
  std::string output;
  int samples = 200;
  bool exploitative = false;
  /// schedule-opt: stage counts to tabulate.
  std::vector<long> stages;
  /// discount-plot: families to tabulate over s in [0, s_max].
  std::vector<FamilySpec> families;
  double s_max = 4.0;
  double s_step = 0.5;

  AgentParams agent() const;
};

/// Parses a flat JSON object. `command` may come from the file, from
/// `command_override` (the CLI positional), or both when they agree. Unknown
/// keys and keys the chosen command does not use are rejected by name.
/// Throws ConfigError whose field() names the offending key.
ExperimentConfig parse_config(std::string_view text,
                              std::optional<Command> command_override = {});

}  // namespace pblab::cli
