#pragma once

#include <iosfwd>
#include <optional>
#include <string>

#include "pblab/cli/config.hpp"
#include "pblab/cli/table.hpp"

namespace pblab::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitInput = 1;
inline constexpr int kExitNumeric = 2;
inline constexpr int kExitVerify = 3;

struct RunResult {
  Table table{{}};
  /// kExitOk, or kExitVerify when a verification check failed.
  int exit_code = kExitOk;
};

/// Runs one experiment. Library errors propagate.
RunResult run(const ExperimentConfig& config);

/// Table rendered in the configured format.
std::string render(const Table& table, Format format);

struct Invocation {
  std::string command;
  std::string config_path;
  std::optional<std::string> output;
  std::optional<std::string> format;
};

/// Reads the config, runs it, writes the artifact to the output path or to
/// `out`, and maps failures to exit codes with a one-line message on `err`.
int execute(const Invocation& invocation, std::ostream& out, std::ostream& err);

}  // namespace pblab::cli
