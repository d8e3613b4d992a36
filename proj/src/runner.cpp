#include "pblab/cli/runner.hpp"

#include <cmath>
#include <fstream>
#include <ostream>
#include <sstream>
#include <system_error>

#include "json.hpp"
#include "pblab/errors.hpp"
#include "pblab/intervention.hpp"
#include "pblab/oracle.hpp"
#include "pblab/trajectory.hpp"
#include "pblab/verify.hpp"

namespace pblab::cli {

namespace {

std::string flag(bool b) { return b ? "true" : "false"; }

double nearest_sample(const Trajectory& traj, double t) {
  const double horizon = traj.samples.back().t;
  const auto n = traj.samples.size() - 1;
  const auto idx = static_cast<std::size_t>(std::lround(t / horizon * n));
  return traj.samples.at(std::min(idx, n)).x;
}

Table run_trajectory(const ExperimentConfig& cfg) {
  const AgentParams params = cfg.agent();
  const Trajectory traj = sample_trajectory(cfg.task, params, cfg.samples);
  std::vector<std::string> cols = {"t", "x"};
  std::optional<Trajectory> oracle;
  if (cfg.oracle) {
    oracle = simulate_discrete(cfg.task, params,
                               cfg.oracle->step_for(cfg.task.horizon));
    cols.push_back("x_oracle");
  }
  cols.insert(cols.end(), {"t_star", "reached"});
  if (oracle) cols.push_back("t_star_oracle");

  Table table(cols);
  for (const TrajectorySample& s : traj.samples) {
    std::vector<Cell> row = {s.t, s.x};
    if (oracle) row.emplace_back(nearest_sample(*oracle, s.t));
    row.emplace_back(traj.t_star);
    row.emplace_back(flag(traj.reached));
    if (oracle) row.emplace_back(oracle->t_star);
    table.add_row(std::move(row));
  }
  return table;
}

Table run_goal_opt(const ExperimentConfig& cfg) {
  const AgentParams params = cfg.agent();
  const double horizon = cfg.task.horizon;
  const double reward = cfg.task.reward;
  const OracleConfig oracle = cfg.oracle.value_or(OracleConfig{});

  GoalOptResult result;
  std::optional<GoalSearchResult> grid;
  try {
    result = optimal_goal(params, horizon, reward, cfg.exploitative);
  } catch (const UnsupportedError&) {
    grid = goal_grid_search(params, horizon, reward, oracle, cfg.exploitative);
    result.theta_star = grid->theta_hat;
    result.final_progress = grid->value;
    result.exploitative = cfg.exploitative;
    result.branch = GoalBranch::Numeric;
  }
  if (cfg.oracle && !grid) {
    grid = goal_grid_search(params, horizon, reward, oracle, cfg.exploitative);
  }

  std::vector<std::string> cols = {"family", "k",           "alpha",
                                   "T",      "R",           "exploitative",
                                   "branch", "theta_star",  "final_progress"};
  std::vector<Cell> row = {std::string(to_string(params.family())),
                           params.k(),
                           params.alpha(),
                           horizon,
                           reward,
                           flag(cfg.exploitative),
                           std::string(to_string(result.branch)),
                           result.theta_star,
                           result.final_progress};
  if (cfg.oracle) {
    cols.insert(cols.end(), {"grid_theta", "grid_value", "grid_cell"});
    row.insert(row.end(), {grid->theta_hat, grid->value, grid->cell});
  }
  Table table(cols);
  table.add_row(std::move(row));
  return table;
}

Table run_schedule_opt(const ExperimentConfig& cfg) {
  const AgentParams params = cfg.agent();
  const double horizon = cfg.task.horizon;
  const double reward = cfg.task.reward;
  const double limit = schedule_limit(params.alpha(), horizon, reward);
  Table table({"N", "stage_T", "stage_R", "stage_theta", "f", "engine_total",
               "limit"});
  for (const long n : cfg.stages) {
    const double stage_horizon = horizon / n;
    const double stage_reward = reward / n;
    const double goal = closed_form_goal(params, stage_horizon, stage_reward);
    // Stages are identical, so one engine run covers all of them.
    const TaskSpec stage{stage_horizon, stage_reward, goal};
    const double realized =
        progress_at(stage, params, stage_horizon, abandonment_time(stage, params));
    table.add_row({static_cast<double>(n), stage_horizon, stage_reward, goal,
                   schedule_value(params, horizon, reward, n),
                   realized * static_cast<double>(n), limit});
  }
  return table;
}

Table run_verify(const ExperimentConfig& cfg, int* exit_code) {
  const VerificationReport report =
      run_verification(cfg.oracle.value_or(OracleConfig{}));
  Table table({"criterion", "title", "check", "expected", "actual", "tolerance",
               "passed", "note"});
  for (const Check& c : report.checks) {
    table.add_row({static_cast<double>(c.criterion), criterion_title(c.criterion),
                   c.name, c.expected, c.actual, c.tolerance, flag(c.passed),
                   c.note});
  }
  *exit_code = report.passed() ? kExitOk : kExitVerify;
  return table;
}

Table run_discount_plot(const ExperimentConfig& cfg) {
  std::vector<std::string> cols = {"s"};
  std::vector<DiscountModel> models;
  for (const FamilySpec& f : cfg.families) {
    cols.push_back(std::string(to_string(f.family)) + "(k=" + format_double(f.k) +
                   ")");
    models.push_back(f.family == DiscountFamily::Exponential
                         ? DiscountModel::exponential(f.k)
                         : DiscountModel::hyperbolic(f.k));
  }
  Table table(cols);
  const long rows =
      static_cast<long>(std::floor(cfg.s_max / cfg.s_step * (1.0 + 1e-12))) + 1;
  for (long i = 0; i < rows; ++i) {
    const double s = cfg.s_step * static_cast<double>(i);
    std::vector<Cell> row = {s};
    for (const DiscountModel& m : models) row.emplace_back(discount_factor(m, 0.0, s));
    table.add_row(std::move(row));
  }
  return table;
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw std::system_error(errno, std::generic_category(),
                            "cannot read config " + path);
  }
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

}  // namespace

RunResult run(const ExperimentConfig& config) {
  RunResult result;
  switch (config.command) {
    case Command::Trajectory:
      result.table = run_trajectory(config);
      break;
    case Command::GoalOpt:
      result.table = run_goal_opt(config);
      break;
    case Command::ScheduleOpt:
      result.table = run_schedule_opt(config);
      break;
    case Command::Verify:
      result.table = run_verify(config, &result.exit_code);
      break;
    case Command::DiscountPlot:
      result.table = run_discount_plot(config);
      break;
  }
  return result;
}

std::string render(const Table& table, Format format) {
  return format == Format::Csv ? to_csv(table) : to_json(table);
}

int execute(const Invocation& invocation, std::ostream& out, std::ostream& err) {
  try {
    ExperimentConfig cfg = parse_config(read_file(invocation.config_path),
                                        parse_command(invocation.command));
    if (invocation.output) cfg.output = *invocation.output;
    if (invocation.format) cfg.format = parse_format(*invocation.format);
    const RunResult result = run(cfg);
    const std::string bytes = render(result.table, cfg.format);
    if (cfg.output.empty()) {
      out << bytes;
      out.flush();
    } else {
      write_atomic(cfg.output, bytes);
    }
    if (result.exit_code == kExitVerify) {
      err << "pblab: verification failed\n";
    }
    return result.exit_code;
  } catch (const ConfigError& e) {
    err << "pblab: config error";
    if (!e.field().empty()) err << " [" << e.field() << "]";
    err << ": " << e.what() << "\n";
    return kExitInput;
  } catch (const DomainError& e) {
    err << "pblab: invalid input: " << e.what() << "\n";
    return kExitInput;
  } catch (const UnsupportedError& e) {
    err << "pblab: unsupported: " << e.what() << "\n";
    return kExitInput;
  } catch (const NumericError& e) {
    err << "pblab: numeric failure: " << e.what() << "\n";
    return kExitNumeric;
  } catch (const std::system_error& e) {
    err << "pblab: " << e.what() << "\n";
    return kExitInput;
  } catch (const nlohmann::json::exception& e) {
    err << "pblab: config error: " << e.what() << "\n";
    return kExitInput;
  }
}

}  // namespace pblab::cli
