#include "pblab/cli/config.hpp"

#include <cmath>
#include <map>
#include <set>

#include "json.hpp"
#include "pblab/errors.hpp"

namespace pblab::cli {

namespace {

using nlohmann::json;

const std::map<std::string_view, Command> kCommands = {
    {"trajectory", Command::Trajectory},
    {"goal-opt", Command::GoalOpt},
    {"schedule-opt", Command::ScheduleOpt},
    {"verify", Command::Verify},
    {"discount-plot", Command::DiscountPlot},
};

std::set<std::string> allowed_keys(Command command) {
  std::set<std::string> keys = {"command", "format", "output"};
  const std::set<std::string> agent = {"T", "R", "alpha", "family", "k"};
  switch (command) {
    case Command::Trajectory:
      keys.insert(agent.begin(), agent.end());
      keys.insert({"theta", "samples", "oracle"});
      break;
    case Command::GoalOpt:
      keys.insert(agent.begin(), agent.end());
      keys.insert({"exploitative", "oracle"});
      break;
    case Command::ScheduleOpt:
      keys.insert(agent.begin(), agent.end());
      keys.insert("N");
      break;
    case Command::Verify:
      keys.insert("oracle");
      break;
    case Command::DiscountPlot:
      keys.insert({"families", "s_max", "s_step"});
      break;
  }
  return keys;
}

const std::set<std::string> kKnownKeys = [] {
  std::set<std::string> all;
  for (const auto& [name, command] : kCommands) {
    const auto keys = allowed_keys(command);
    all.insert(keys.begin(), keys.end());
  }
  return all;
}();

const json& require(const json& obj, const std::string& key) {
  const auto it = obj.find(key);
  if (it == obj.end()) {
    throw ConfigError(key, "missing required field \"" + key + "\"");
  }
  return *it;
}

double number(const json& value, const std::string& key) {
  if (!value.is_number()) {
    throw ConfigError(key, key + " must be a number");
  }
  const double v = value.get<double>();
  if (!std::isfinite(v)) throw ConfigError(key, key + " must be finite");
  return v;
}

long integer(const json& value, const std::string& key) {
  if (!value.is_number_integer()) {
    throw ConfigError(key, key + " must be an integer");
  }
  return value.get<long>();
}

std::string text(const json& value, const std::string& key) {
  if (!value.is_string()) throw ConfigError(key, key + " must be a string");
  return value.get<std::string>();
}

DiscountFamily parse_family(const std::string& name, const std::string& key) {
  if (name == "exponential") return DiscountFamily::Exponential;
  if (name == "hyperbolic") return DiscountFamily::Hyperbolic;
  if (name == "generic") {
    throw ConfigError(key, "generic discount functions cannot be configured "
                           "from JSON; use the library API");
  }
  throw ConfigError(key, key + " must be \"exponential\" or \"hyperbolic\"");
}

void require_k(double k, const std::string& key) {
  if (!(k > 0.0)) throw ConfigError(key, key + " must be positive");
}

OracleConfig parse_oracle(const json& obj, std::optional<double> horizon) {
  if (!obj.is_object()) throw ConfigError("oracle", "oracle must be an object");
  static const std::set<std::string> kOracleKeys = {
      "h", "theta_grid", "simplex_grid", "tol_rel", "theta_upper"};
  for (const auto& [key, value] : obj.items()) {
    if (!kOracleKeys.count(key)) {
      throw ConfigError("oracle." + key, "unknown field \"oracle." + key + "\"");
    }
  }
  OracleConfig out;
  if (obj.contains("h")) {
    out.step = number(obj["h"], "oracle.h");
  } else if (horizon) {
    out.step = *horizon / 2000.0;
  }
  if (obj.contains("theta_grid")) {
    out.theta_grid = static_cast<int>(integer(obj["theta_grid"], "oracle.theta_grid"));
  }
  if (obj.contains("simplex_grid")) {
    out.simplex_grid =
        static_cast<int>(integer(obj["simplex_grid"], "oracle.simplex_grid"));
  }
  if (obj.contains("tol_rel")) out.tol_rel = number(obj["tol_rel"], "oracle.tol_rel");
  if (obj.contains("theta_upper")) {
    out.theta_upper = number(obj["theta_upper"], "oracle.theta_upper");
  }
  try {
    validate(out);
  } catch (const ConfigError& e) {
    throw ConfigError("oracle." + e.field(), e.what());
  }
  return out;
}

void parse_agent(const json& obj, ExperimentConfig& cfg) {
  cfg.task.horizon = number(require(obj, "T"), "T");
  cfg.task.reward = number(require(obj, "R"), "R");
  cfg.alpha = number(require(obj, "alpha"), "alpha");
  if (!(cfg.alpha > 1.0)) throw ConfigError("alpha", "alpha must exceed 1");
  cfg.discount.family = parse_family(text(require(obj, "family"), "family"), "family");
  cfg.discount.k = number(require(obj, "k"), "k");
  require_k(cfg.discount.k, "k");
}

}  // namespace

std::string_view to_string(Command command) {
  for (const auto& [name, value] : kCommands) {
    if (value == command) return name;
  }
  return "unknown";
}

Command parse_command(std::string_view name) {
  const auto it = kCommands.find(name);
  if (it == kCommands.end()) {
    throw ConfigError("command", "unknown command \"" + std::string(name) + "\"");
  }
  return it->second;
}

Format parse_format(std::string_view name) {
  if (name == "csv") return Format::Csv;
  if (name == "json") return Format::Json;
  throw ConfigError("format", "format must be \"csv\" or \"json\"");
}

AgentParams ExperimentConfig::agent() const {
  return AgentParams(discount.family == DiscountFamily::Exponential
                         ? DiscountModel::exponential(discount.k)
                         : DiscountModel::hyperbolic(discount.k),
                     alpha);
}

ExperimentConfig parse_config(std::string_view source,
                              std::optional<Command> command_override) {
  json obj;
  try {
    obj = json::parse(source.begin(), source.end());
  } catch (const json::parse_error& e) {
    throw ConfigError("config", std::string("malformed JSON: ") + e.what());
  }
  if (!obj.is_object()) {
    throw ConfigError("config", "config must be a JSON object");
  }

  ExperimentConfig cfg;
  if (obj.contains("command")) {
    cfg.command = parse_command(text(obj["command"], "command"));
    if (command_override && *command_override != cfg.command) {
      throw ConfigError("command", "config command \"" +
                                       std::string(to_string(cfg.command)) +
                                       "\" differs from the requested \"" +
                                       std::string(to_string(*command_override)) +
                                       "\"");
    }
  } else if (command_override) {
    cfg.command = *command_override;
  } else {
    throw ConfigError("command", "missing required field \"command\"");
  }

  const auto allowed = allowed_keys(cfg.command);
  for (const auto& [key, value] : obj.items()) {
    if (!kKnownKeys.count(key)) {
      throw ConfigError(key, "unknown field \"" + key + "\"");
    }
    if (!allowed.count(key)) {
      throw ConfigError(key, "field \"" + key + "\" is not used by command " +
                                 std::string(to_string(cfg.command)));
    }
  }

  if (obj.contains("format")) cfg.format = parse_format(text(obj["format"], "format"));
  if (obj.contains("output")) cfg.output = text(obj["output"], "output");

  switch (cfg.command) {
    case Command::Trajectory:
      parse_agent(obj, cfg);
      cfg.task.goal = number(require(obj, "theta"), "theta");
      if (obj.contains("samples")) {
        const long n = integer(obj["samples"], "samples");
        if (n < 2 || n > 1'000'000) {
          throw ConfigError("samples", "samples must lie in [2, 1000000]");
        }
        cfg.samples = static_cast<int>(n);
      }
      validate(cfg.task);
      break;
    case Command::GoalOpt:
      parse_agent(obj, cfg);
      if (obj.contains("exploitative")) {
        if (!obj["exploitative"].is_boolean()) {
          throw ConfigError("exploitative", "exploitative must be true or false");
        }
        cfg.exploitative = obj["exploitative"].get<bool>();
      }
      validate(cfg.task);
      break;
    case Command::ScheduleOpt: {
      parse_agent(obj, cfg);
      const json& n = require(obj, "N");
      if (!n.is_array() || n.empty()) {
        throw ConfigError("N", "N must be a non-empty array of stage counts");
      }
      for (const json& v : n) {
        const long stages = integer(v, "N");
        if (stages < 1 || stages > 1'000'000) {
          throw ConfigError("N", "N entries must lie in [1, 1000000]");
        }
        cfg.stages.push_back(stages);
      }
      validate(cfg.task);
      break;
    }
    case Command::Verify:
      break;
    case Command::DiscountPlot: {
      const json& fams = require(obj, "families");
      if (!fams.is_array() || fams.empty()) {
        throw ConfigError("families", "families must be a non-empty array");
      }
      for (const json& f : fams) {
        if (!f.is_object()) {
          throw ConfigError("families", "families entries must be objects");
        }
        for (const auto& [key, value] : f.items()) {
          if (key != "family" && key != "k") {
            throw ConfigError("families." + key,
                              "unknown field \"families." + key + "\"");
          }
        }
        FamilySpec spec;
        spec.family = parse_family(
            text(require(f, "family"), "families.family"), "families.family");
        spec.k = number(require(f, "k"), "families.k");
        require_k(spec.k, "families.k");
        for (const FamilySpec& seen : cfg.families) {
          if (seen.family == spec.family && seen.k == spec.k) {
            throw ConfigError("families", "duplicate family entry");
          }
        }
        cfg.families.push_back(spec);
      }
      if (obj.contains("s_max")) cfg.s_max = number(obj["s_max"], "s_max");
      if (obj.contains("s_step")) cfg.s_step = number(obj["s_step"], "s_step");
      if (!(cfg.s_max >= 0.0)) throw ConfigError("s_max", "s_max must be >= 0");
      if (!(cfg.s_step > 0.0)) throw ConfigError("s_step", "s_step must be positive");
      if (cfg.s_max / cfg.s_step > 1e6) {
        throw ConfigError("s_step", "s_step yields more than 1e6 rows");
      }
      break;
    }
  }

  if (obj.contains("oracle")) {
    // verify instances carry their own horizons, so h stays relative there.
    std::optional<double> horizon;
    if (cfg.command != Command::Verify) horizon = cfg.task.horizon;
    cfg.oracle = parse_oracle(obj["oracle"], horizon);
  }
  return cfg;
}

}  // namespace pblab::cli
