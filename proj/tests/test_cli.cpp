#include <gtest/gtest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "json.hpp"
#include "pblab/cli/config.hpp"
#include "pblab/cli/runner.hpp"
#include "pblab/cli/table.hpp"
#include "pblab/errors.hpp"

namespace pblab::cli {
namespace {

namespace fs = std::filesystem;

const char* kMinimal = R"({"command": "trajectory", "T": 2, "R": 2, "theta": 1,
                           "alpha": 2, "family": "exponential", "k": 0.5})";

std::string field_of(const std::string& text) {
  try {
    parse_config(text);
  } catch (const ConfigError& e) {
    return e.field();
  }
  return "<no error>";
}

TEST(ParseConfig, MinimalTrajectoryGetsDefaults) {
  const ExperimentConfig c = parse_config(kMinimal);
  EXPECT_EQ(c.command, Command::Trajectory);
  EXPECT_EQ(c.samples, 200);
  EXPECT_EQ(c.format, Format::Csv);
  EXPECT_TRUE(c.output.empty());
  EXPECT_FALSE(c.oracle.has_value());
  EXPECT_EQ(c.task.horizon, 2.0);
  EXPECT_EQ(c.discount.k, 0.5);
}

TEST(ParseConfig, OracleStepDefaultsToHorizonFraction) {
  const ExperimentConfig c = parse_config(
      R"({"command": "goal-opt", "T": 4, "R": 1, "alpha": 2, "family": "hyperbolic",
          "k": 1, "oracle": {}})");
  ASSERT_TRUE(c.oracle.has_value());
  EXPECT_EQ(*c.oracle->step, 0.002);
  EXPECT_EQ(c.oracle->theta_grid, 2001);
  EXPECT_EQ(c.oracle->simplex_grid, 101);
}

TEST(ParseConfig, AlphaMustExceedOne) {
  try {
    parse_config(R"({"command": "trajectory", "T": 2, "R": 2, "theta": 1,
                     "alpha": 1.0, "family": "exponential", "k": 0.5})");
    FAIL();
  } catch (const ConfigError& e) {
    EXPECT_EQ(e.field(), "alpha");
    EXPECT_STREQ(e.what(), "alpha must exceed 1");
  }
}

TEST(ParseConfig, UnknownFieldNamed) {
  EXPECT_EQ(field_of(R"({"command": "verify", "beta": 1})"), "beta");
  EXPECT_EQ(field_of(R"({"command": "verify", "oracle": {"beta": 1}})"), "oracle.beta");
}

TEST(ParseConfig, FieldOfOtherCommandRejected) {
  EXPECT_EQ(field_of(R"({"command": "verify", "T": 1})"), "T");
  EXPECT_EQ(field_of(R"({"command": "goal-opt", "T": 2, "R": 1, "alpha": 2,
                         "family": "exponential", "k": 1, "theta": 1})"),
            "theta");
}

TEST(ParseConfig, MissingAndMistypedFields) {
  EXPECT_EQ(field_of(R"({"command": "trajectory", "T": 2, "R": 2, "alpha": 2,
                         "family": "exponential", "k": 0.5})"),
            "theta");
  EXPECT_EQ(field_of(R"({"command": "trajectory", "T": "2", "R": 2, "theta": 1,
                         "alpha": 2, "family": "exponential", "k": 0.5})"),
            "T");
  EXPECT_EQ(field_of(R"({"command": "trajectory", "T": 2, "R": 2, "theta": 1,
                         "alpha": 2, "family": "lognormal", "k": 0.5})"),
            "family");
  EXPECT_EQ(field_of(R"({"command": "trajectory", "T": 2, "R": 2, "theta": 1,
                         "alpha": 2, "family": "exponential", "k": 0})"),
            "k");
  EXPECT_EQ(field_of(R"({"command": "schedule-opt", "T": 2, "R": 1, "alpha": 2,
                         "family": "exponential", "k": 1, "N": [0]})"),
            "N");
  EXPECT_EQ(field_of(R"({"command": "nope"})"), "command");
  EXPECT_EQ(field_of("{not json"), "config");
  EXPECT_EQ(field_of("[1, 2]"), "config");
  EXPECT_EQ(field_of(R"({"T": 1})"), "command");
}

TEST(ParseConfig, CommandOverride) {
  EXPECT_EQ(parse_config(R"({})", Command::Verify).command, Command::Verify);
  EXPECT_THROW(parse_config(kMinimal, Command::Verify), ConfigError);
}

TEST(Emit, EmptyTableIsHeaderOnly) {
  EXPECT_EQ(to_csv(Table({"t", "x"})), "t,x\n");
  EXPECT_EQ(to_json(Table({"t", "x"})), "[]\n");
}

TEST(Emit, SingleCell) {
  Table t({"x"});
  t.add_row({0.5});
  EXPECT_EQ(to_csv(t), "x\n0.5\n");
}

TEST(Emit, NonFiniteRefused) {
  Table t({"x"});
  t.add_row({std::nan("")});
  EXPECT_THROW(to_csv(t), NumericError);
  EXPECT_THROW(to_json(t), NumericError);
  Table u({"x"});
  u.add_row({INFINITY});
  EXPECT_THROW(to_csv(u), NumericError);
}

TEST(Emit, RaggedRowRefused) {
  Table t({"a", "b"});
  EXPECT_THROW(t.add_row({1.0}), DomainError);
}

TEST(Emit, StringQuoting) {
  Table t({"note"});
  t.add_row({std::string("a,b \"c\"")});
  EXPECT_EQ(to_csv(t), "note\n\"a,b \"\"c\"\"\"\n");
}

TEST(Emit, ShortestRoundTrip) {
  for (double v : {0.1, 1.0 / 3.0, 1e-300, 6.02214076e23, -2.5, 0.0}) {
    const std::string s = format_double(v);
    EXPECT_EQ(std::stod(s), v) << s;
  }
  EXPECT_EQ(format_double(0.1), "0.1");
  EXPECT_EQ(format_double(2.0), "2");
}

TEST(Emit, JsonArrayOfObjects) {
  Table t({"s", "label"});
  t.add_row({0.25, std::string("a")});
  const auto parsed = nlohmann::json::parse(to_json(t));
  ASSERT_TRUE(parsed.is_array());
  EXPECT_EQ(parsed[0]["s"].get<double>(), 0.25);
  EXPECT_EQ(parsed[0]["label"].get<std::string>(), "a");
}

TEST(Emit, AtomicWriteReplacesFile) {
  const fs::path dir = fs::temp_directory_path() / "pblab_emit_test";
  fs::create_directories(dir);
  const std::string path = (dir / "out.csv").string();
  write_atomic(path, "old\n");
  write_atomic(path, "new\n");
  std::ifstream in(path);
  std::string line;
  std::getline(in, line);
  EXPECT_EQ(line, "new");
  EXPECT_FALSE(fs::exists(path + ".tmp"));
  fs::remove_all(dir);
}

TEST(Run, DiscountPlot) {
  const ExperimentConfig c = parse_config(
      R"({"command": "discount-plot", "families": [{"family": "exponential", "k": 1},
          {"family": "hyperbolic", "k": 1}], "s_max": 4, "s_step": 0.5})");
  const Table t = run(c).table;
  ASSERT_EQ(t.rows().size(), 9u);
  EXPECT_EQ(t.columns(), (std::vector<std::string>{"s", "exponential(k=1)", "hyperbolic(k=1)"}));
  for (const auto& row : t.rows()) {
    const double s = std::get<double>(row[0]);
    const double e = std::get<double>(row[1]);
    const double h = std::get<double>(row[2]);
    EXPECT_NEAR(e, std::exp(-s), 1e-15);
    EXPECT_NEAR(h, 1 / (1 + s), 1e-15);
    if (s >= 1) {
      EXPECT_GE(h, e);
    }
  }
}

TEST(Run, GoalOptJson) {
  ExperimentConfig c = parse_config(
      R"({"command": "goal-opt", "T": 2, "R": 1, "alpha": 2, "family": "exponential",
          "k": 0.6931471805599453, "format": "json"})");
  const auto parsed = nlohmann::json::parse(render(run(c).table, c.format));
  EXPECT_NEAR(parsed[0]["theta_star"].get<double>(), 1.0402, 1e-4);
  EXPECT_EQ(parsed[0]["branch"].get<std::string>(), "exp-closed");
}

TEST(Run, GoalOptNumericFallback) {
  const ExperimentConfig c = parse_config(
      R"({"command": "goal-opt", "T": 3, "R": 2, "alpha": 3, "family": "hyperbolic", "k": 1})");
  const Table t = run(c).table;
  EXPECT_EQ(std::get<std::string>(t.rows()[0][6]), "numeric");
}

TEST(Run, TrajectoryWithOracle) {
  const ExperimentConfig c = parse_config(
      R"({"command": "trajectory", "T": 2, "R": 2, "theta": 1, "alpha": 2,
          "family": "hyperbolic", "k": 1, "samples": 5, "oracle": {"h": 0.001}})");
  const Table t = run(c).table;
  ASSERT_EQ(t.rows().size(), 5u);
  EXPECT_EQ(t.columns()[2], "x_oracle");
  EXPECT_NEAR(std::get<double>(t.rows()[2][1]), 1.0 / 3.0, 1e-15);
  EXPECT_NEAR(std::get<double>(t.rows()[2][2]), 1.0 / 3.0, 1e-2 / 3);
  EXPECT_EQ(std::get<std::string>(t.rows()[4][4]), "true");
}

TEST(Run, ScheduleOpt) {
  const ExperimentConfig c = parse_config(
      R"({"command": "schedule-opt", "T": 2, "R": 1, "alpha": 2, "family": "hyperbolic",
          "k": 1, "N": [1, 2]})");
  const Table t = run(c).table;
  ASSERT_EQ(t.rows().size(), 2u);
  EXPECT_NEAR(std::get<double>(t.rows()[1][4]), std::sqrt(1.5), 1e-15);
  EXPECT_NEAR(std::get<double>(t.rows()[1][5]), std::sqrt(1.5), 1e-12);
  EXPECT_NEAR(std::get<double>(t.rows()[1][6]), std::sqrt(2.0), 1e-15);
}

TEST(Run, VerifyPasses) {
  const RunResult r = run(parse_config(R"({"command": "verify"})"));
  EXPECT_EQ(r.exit_code, kExitOk);
  EXPECT_GT(r.table.rows().size(), 10u);
}

class ExecuteTest : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = fs::temp_directory_path() / "pblab_execute_test";
    fs::create_directories(dir_);
  }
  void TearDown() override { fs::remove_all(dir_); }

  std::string write(const std::string& name, const std::string& body) {
    const fs::path p = dir_ / name;
    std::ofstream(p) << body;
    return p.string();
  }

  int exec(const std::string& command, const std::string& path,
           std::optional<std::string> output = {},
           std::optional<std::string> format = {}) {
    out_.str("");
    err_.str("");
    return execute(Invocation{command, path, output, format}, out_, err_);
  }

  fs::path dir_;
  std::ostringstream out_;
  std::ostringstream err_;
};

TEST_F(ExecuteTest, ExitCodes) {
  EXPECT_EQ(exec("trajectory", write("ok.json", kMinimal)), kExitOk);
  EXPECT_EQ(out_.str().substr(0, 4), "t,x,");

  EXPECT_EQ(exec("verify", write("bad.json", R"({"beta": 1})")), kExitInput);
  EXPECT_NE(err_.str().find("beta"), std::string::npos);

  EXPECT_EQ(exec("verify", (dir_ / "missing.json").string()), kExitInput);
  EXPECT_EQ(exec("trajectory", write("ok2.json", kMinimal), {}, "xml"), kExitInput);

  const std::string unsupported = write(
      "sched.json", R"({"command": "schedule-opt", "T": 2, "R": 1, "alpha": 3,
                       "family": "hyperbolic", "k": 1, "N": [2]})");
  EXPECT_EQ(exec("schedule-opt", unsupported), kExitInput);
}

TEST_F(ExecuteTest, OutputFileAndFormatOverride) {
  const std::string cfg = write("ok.json", kMinimal);
  const std::string out = (dir_ / "traj.json").string();
  ASSERT_EQ(exec("trajectory", cfg, out, "json"), kExitOk);
  EXPECT_TRUE(out_.str().empty());
  std::ifstream in(out);
  const auto parsed = nlohmann::json::parse(in);
  EXPECT_EQ(parsed.size(), 200u);
}

TEST_F(ExecuteTest, Deterministic) {
  const std::string cfg = write("ok.json", kMinimal);
  exec("trajectory", cfg);
  const std::string first = out_.str();
  exec("trajectory", cfg);
  EXPECT_EQ(first, out_.str());
}

}  // namespace
}  // namespace pblab::cli
