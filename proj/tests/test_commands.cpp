#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "qssmm/commands.hpp"
#include "qssmm/csv.hpp"

using namespace qssmm;
namespace fs = std::filesystem;

namespace {

class CommandTest : public ::testing::Test {
protected:
  void SetUp() override {
    dir_ = fs::temp_directory_path() /
           ("qssmm_cmd_" + std::string(::testing::UnitTest::GetInstance()->current_test_info()->name()));
    fs::remove_all(dir_);
    fs::create_directories(dir_);
  }
  void TearDown() override { fs::remove_all(dir_); }

  std::string write_config(const std::string& name, const std::string& text) {
    const auto p = dir_ / name;
    std::ofstream(p) << text;
    return p.string();
  }
  CommandOptions out(const std::string& sub) {
    CommandOptions o;
    o.out_dir = (dir_ / sub).string();
    return o;
  }
  static std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
  }

  fs::path dir_;
  std::ostringstream log_, err_;
};

}  // namespace

TEST_F(CommandTest, SimulateWithoutReactionsKeepsConstantState) {
  const auto cfg = write_config("c.yaml", R"(model: full_scaled_irrev
epsilon: 0.01
grid: {cells: 4}
rates: {k1: 0, k_m1: 0, k2: 0}
final_time: 0.001
initial_condition:
  s_low: 0.7
  s_high: 0.7
  c_amplitude: 0
  c_offset: 0.2
  y_amplitude: 0
  y_offset: 0.9
  bump_amplitude: 0
)");
  ASSERT_EQ(run_command("simulate", cfg, out("sim"), log_, err_), kExitOk) << err_.str();
  const auto t = read_csv((dir_ / "sim" / "snapshot_0.csv").string());
  EXPECT_EQ(t.header, (std::vector<std::string>{"x", "s", "c_star", "y_star"}));
  ASSERT_EQ(t.rows.size(), 4u);
  for (const auto& r : t.rows) {
    EXPECT_NEAR(r[1], 0.7, 1e-12);
    EXPECT_NEAR(r[2], 0.2, 1e-12);
    EXPECT_NEAR(r[3], 0.9, 1e-12);
  }
  EXPECT_DOUBLE_EQ(t.rows[0][0], 0.125);
}

TEST_F(CommandTest, MissingModelIsConfigError) {
  const auto cfg = write_config("c.yaml", "grid: {cells: 4}\n");
  EXPECT_EQ(run_command("simulate", cfg, out("x"), log_, err_), kExitConfigError);
  EXPECT_NE(err_.str().find("model"), std::string::npos);
  EXPECT_EQ(run_command("simulate", (dir_ / "nope.yaml").string(), out("x"), log_, err_),
            kExitConfigError);
  EXPECT_EQ(run_command("bogus", write_config("d.yaml", "model: full_scaled_irrev\n"), out("x"),
                        log_, err_),
            kExitConfigError);
}

TEST_F(CommandTest, ConvergeSingleEpsilonHasNoSlope) {
  const auto cfg = write_config("c.yaml", "model: full_scaled_irrev\ngrid: {cells: 10}\n");
  auto o = out("conv");
  o.epsilons = std::vector<double>{1e-3};
  ASSERT_EQ(run_command("converge", cfg, o, log_, err_), kExitOk) << err_.str();
  const auto t = read_csv((dir_ / "conv" / "convergence.csv").string());
  EXPECT_EQ(t.header, (std::vector<std::string>{"epsilon", "err_s", "err_cstar", "err_ystar"}));
  ASSERT_EQ(t.rows.size(), 1u);
  EXPECT_EQ(t.rows[0][0], 1e-3);
  for (const auto& line : t.trailer) EXPECT_EQ(line.find("slope_"), std::string::npos);
}

TEST_F(CommandTest, ConvergeReportsSlopes) {
  const auto cfg = write_config("c.yaml", "model: full_scaled_irrev\ngrid: {cells: 10}\n");
  auto o = out("conv");
  o.epsilons = std::vector<double>{1e-2, 1e-3, 1e-4};
  o.jobs = 2;
  ASSERT_EQ(run_command("converge", cfg, o, log_, err_), kExitOk) << err_.str();
  const auto t = read_csv((dir_ / "conv" / "convergence.csv").string());
  ASSERT_EQ(t.rows.size(), 3u);
  ASSERT_FALSE(t.trailer.empty());
  EXPECT_NE(t.trailer.back().find("slope_s="), std::string::npos);
  EXPECT_TRUE(fs::exists(dir_ / "conv" / "monitors.csv"));
}

TEST_F(CommandTest, VerifyTfIsDeterministic) {
  const auto cfg = write_config("c.yaml",
                                "model: full_scaled_irrev\nsamples: 10\nverify_cells: [1, 3]\n");
  ASSERT_EQ(run_command("verify-tf", cfg, out("a"), log_, err_), kExitOk) << err_.str();
  ASSERT_EQ(run_command("verify-tf", cfg, out("b"), log_, err_), kExitOk);
  const auto a = slurp(dir_ / "a" / "verify_tf.csv");
  EXPECT_FALSE(a.empty());
  EXPECT_EQ(a, slurp(dir_ / "b" / "verify_tf.csv"));
  auto o = out("c");
  o.seed = 7;
  ASSERT_EQ(run_command("verify-tf", cfg, o, log_, err_), kExitOk);
  EXPECT_NE(a, slurp(dir_ / "c" / "verify_tf.csv"));
}

TEST_F(CommandTest, VerifyTfDetectsCorruptedClosedForm) {
  const auto cfg = write_config("c.yaml",
                                "model: full_scaled_irrev\nsamples: 5\nverify_cells: [1]\n");
  auto o = out("v");
  o.corrupt_closed_form = true;
  EXPECT_EQ(run_command("verify-tf", cfg, o, log_, err_), kExitVerificationFailed);
}

TEST_F(CommandTest, ProjectIcPlacesComplexOnManifold) {
  const auto cfg = write_config("c.yaml", "model: full_scaled_irrev\ngrid: {cells: 8}\n");
  ASSERT_EQ(run_command("project-ic", cfg, out("p"), log_, err_), kExitOk) << err_.str();
  const auto t = read_csv((dir_ / "p" / "project_ic.csv").string());
  ASSERT_EQ(t.rows.size(), 8u);
  const auto is = t.column("s"), iy = t.column("y_star"), ic = t.column("c_star");
  ASSERT_LT(ic, t.header.size());
  for (const auto& r : t.rows) {
    EXPECT_EQ(r[is], r[t.column("s_raw")]);
    EXPECT_NEAR(r[ic], r[is] * r[iy] / (r[is] + 2.0), 1e-15);
  }
}

TEST_F(CommandTest, SimulateOutputIsByteIdentical) {
  const auto cfg = write_config("c.yaml",
                                "model: reduced_irrev_big_delta\ngrid: {cells: 12}\nsnapshots: [0.001, 0.005]\n");
  ASSERT_EQ(run_command("simulate", cfg, out("a"), log_, err_), kExitOk) << err_.str();
  ASSERT_EQ(run_command("simulate", cfg, out("b"), log_, err_), kExitOk);
  for (const char* f : {"snapshot_0.csv", "snapshot_1.csv"})
    EXPECT_EQ(slurp(dir_ / "a" / f), slurp(dir_ / "b" / f)) << f;
}
