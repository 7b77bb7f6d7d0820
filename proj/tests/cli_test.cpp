#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <gtest/gtest.h>

#include "cli/commands.hpp"
#include "cli/config.hpp"

namespace chainent::cli {
namespace {

namespace fs = std::filesystem;

class CliTest : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = fs::temp_directory_path() /
           ("chainent_cli_" + std::to_string(::testing::UnitTest::GetInstance()->random_seed()) + "_" +
            ::testing::UnitTest::GetInstance()->current_test_info()->name());
    fs::create_directories(dir_);
  }
  void TearDown() override { fs::remove_all(dir_); }

  std::string write(const std::string& name, const std::string& text) {
    const fs::path p = dir_ / name;
    std::ofstream(p) << text;
    return p.string();
  }

  int run_cli(std::vector<std::string> args) {
    out_.str("");
    err_.str("");
    return run(args, out_, err_);
  }

  static std::string reference(int nx, int ny, const std::string& extra = "") {
    return "[model]\nlambda = 4, 1\nq = 1\n[geometry]\nn_x = " + std::to_string(nx) +
           "\nn_y = " + std::to_string(ny) + "\n" + extra;
  }

  fs::path dir_;
  std::ostringstream out_;
  std::ostringstream err_;
};

TEST_F(CliTest, ValidatePasses) {
  EXPECT_EQ(run_cli({"validate", "--config", write("a.cfg", reference(4, 4))}), kOk);
  EXPECT_NE(out_.str().find("pass"), std::string::npos);
}

TEST_F(CliTest, ValidateFailsWithZeroGap) {
  const auto cfg = write("a.cfg", "[model]\nlambda = 3, 1\nq = 1\n[geometry]\nn_x = 4\nn_y = 4\n");
  EXPECT_EQ(run_cli({"validate", "--config", cfg}), kValidation);
  EXPECT_NE(out_.str().find("min(λ−q)=0"), std::string::npos);
}

TEST_F(CliTest, MissingKeyIsConfigError) {
  const auto cfg = write("a.cfg", "[model]\nlambda = 4, 1\nq = 1\n[geometry]\nn_x = 4\n");
  EXPECT_EQ(run_cli({"validate", "--config", cfg}), kUsage);
  EXPECT_NE(err_.str().find("geometry.n_y"), std::string::npos);
}

TEST_F(CliTest, UnknownKeyIsRejected) {
  EXPECT_EQ(run_cli({"validate", "--config", write("a.cfg", reference(4, 4, "[run]\nspeed = 3\n"))}), kUsage);
  EXPECT_EQ(run_cli({"validate", "--config", write("b.cfg", reference(4, 4, "[extra]\n"))}), kUsage);
  EXPECT_EQ(run_cli({"validate", "--config", write("c.cfg", reference(4, 4, "[geometry]\nn_x = 5\n"))}), kUsage);
}

TEST_F(CliTest, PermissiveModeFlag) {
  const auto cfg = write("a.cfg", "[model]\nlambda = 2\nq = 0\n[geometry]\nn_x = 1\nn_y = 2\n");
  EXPECT_EQ(run_cli({"validate", "--config", cfg}), kValidation);
  EXPECT_EQ(run_cli({"validate", "--config", cfg, "--mode", "permissive"}), kOk);
}

TEST_F(CliTest, EntropyFullBlockIsZero) {
  const auto cfg = write("a.cfg", reference(4, 3, "[block]\nl_x = 4\nl_y = 3\n"));
  ASSERT_EQ(run_cli({"entropy", "--config", cfg}), kOk);
  std::istringstream in(out_.str());
  std::string header, row;
  std::getline(in, header);
  std::getline(in, row);
  EXPECT_EQ(header, "l_x,l_y,S,S1,S2,wall_ms");
  EXPECT_EQ(row.substr(0, 4), "4,3,");
  EXPECT_LT(std::abs(std::stod(row.substr(4))), 1e-9);
}

TEST_F(CliTest, EntropyBlockTooLarge) {
  const auto cfg = write("a.cfg", reference(4, 3, "[block]\nl_x = 5\nl_y = 1\n"));
  EXPECT_EQ(run_cli({"entropy", "--config", cfg}), kUsage);
}

TEST_F(CliTest, EntropyValidationFailure) {
  const auto cfg =
      write("a.cfg", "[model]\nlambda = 3, 1\nq = 1\n[geometry]\nn_x = 4\nn_y = 4\n[block]\nl_x = 1\nl_y = 1\n");
  EXPECT_EQ(run_cli({"entropy", "--config", cfg}), kValidation);
}

TEST_F(CliTest, EntropyBitsFlag) {
  const auto cfg = write("a.cfg", reference(6, 6, "[block]\nl_x = 2\nl_y = 2\n"));
  ASSERT_EQ(run_cli({"entropy", "--config", cfg}), kOk);
  const std::string nats = out_.str();
  ASSERT_EQ(run_cli({"entropy", "--config", cfg, "--bits"}), kOk);
  const std::string bits = out_.str();
  const auto value = [](const std::string& csv) {
    const auto line = csv.substr(csv.find('\n') + 1);
    return std::stod(line.substr(4));
  };
  EXPECT_NEAR(value(bits) * std::log(2.0), value(nats), 1e-14);
}

TEST_F(CliTest, SweepIsByteIdenticalAndFeedsFit) {
  const auto cfg = write("a.cfg", reference(64, 1024));
  const auto a = (dir_ / "a.csv").string();
  const auto b = (dir_ / "b.csv").string();
  const std::string grid = "lx=2,4,8;ly=16,32,64";
  ASSERT_EQ(run_cli({"sweep", "--config", cfg, "--grid", grid, "--out", a}), kOk);
  ASSERT_EQ(run_cli({"sweep", "--config", cfg, "--grid", grid, "--out", b, "--threads", "3"}), kOk);
  std::ifstream fa(a, std::ios::binary), fb(b, std::ios::binary);
  const std::string ca((std::istreambuf_iterator<char>(fa)), {});
  const std::string cb((std::istreambuf_iterator<char>(fb)), {});
  EXPECT_EQ(ca, cb);
  EXPECT_EQ(std::count(ca.begin(), ca.end(), '\n'), 10);
  ASSERT_EQ(run_cli({"fit", a}), kOk);
  EXPECT_NE(out_.str().find("b="), std::string::npos);
  EXPECT_NE(out_.str().find("residual_r_squared="), std::string::npos);
}

TEST_F(CliTest, SweepNeedsGrid) {
  EXPECT_EQ(run_cli({"sweep", "--config", write("a.cfg", reference(8, 8))}), kUsage);
  EXPECT_EQ(run_cli({"sweep", "--config", write("b.cfg", reference(8, 8)), "--grid", "lx=1"}), kUsage);
}

TEST_F(CliTest, FitRecoversSyntheticCoefficients) {
  std::ostringstream csv;
  csv << "l_x,l_y,S,S1,S2,wall_ms\n";
  for (int lx : {2, 4, 8}) {
    for (int ly : {16, 32, 64}) {
      csv.precision(17);
      csv << lx << ',' << ly << ',' << 0.5 * lx * std::log(ly) << ",0,0,0\n";
    }
  }
  ASSERT_EQ(run_cli({"fit", write("s.csv", csv.str())}), kOk);
  std::istringstream in(out_.str());
  std::string line;
  std::getline(in, line);
  ASSERT_EQ(line.substr(0, 2), "b=");
  EXPECT_NEAR(std::stod(line.substr(2)), 0.5, 1e-12);
}

TEST_F(CliTest, FitErrors) {
  EXPECT_EQ(run_cli({"fit", (dir_ / "missing.csv").string()}), kUsage);
  EXPECT_EQ(run_cli({"fit", write("bad.csv", "nope\n")}), kUsage);
  EXPECT_EQ(run_cli({"fit", write("few.csv", "l_x,l_y,S,S1,S2,wall_ms\n1,2,0,0,0,0\n")}), kNumeric);
}

TEST_F(CliTest, OracleCheckPasses) {
  EXPECT_EQ(run_cli({"oracle-check", "--config", write("a.cfg", reference(6, 6))}), kOk);
  EXPECT_NE(out_.str().find("mismatches=0"), std::string::npos);
}

TEST_F(CliTest, OracleCheckReportsMismatchBelowTolerance) {
  const auto cfg = write("a.cfg", reference(4, 4, "[run]\ntolerance = 1e-300\n"));
  EXPECT_EQ(run_cli({"oracle-check", "--config", cfg}), kAcceptance);
}

TEST_F(CliTest, OracleCheckSizeCap) {
  const auto cfg = write("a.cfg", reference(10, 10, "[run]\ndense_cap = 50\n"));
  EXPECT_EQ(run_cli({"oracle-check", "--config", cfg}), kUsage);
}

TEST_F(CliTest, SpectrumScaling) {
  ASSERT_EQ(run_cli({"spectrum", "--config", write("a.cfg", reference(8, 16))}), kOk);
  std::istringstream in(out_.str());
  std::string line;
  std::getline(in, line);
  EXPECT_EQ(line, "n_y,min_freq,max_freq,min_freq_sqrt_ny");
  std::vector<double> scaled;
  while (std::getline(in, line) && line[0] != '#') scaled.push_back(std::stod(line.substr(line.rfind(',') + 1)));
  ASSERT_EQ(scaled.size(), 4u);
  for (double s : scaled) EXPECT_NEAR(s, scaled[0], 1e-12);
}

TEST_F(CliTest, UsageErrors) {
  EXPECT_EQ(run_cli({}), kUsage);
  EXPECT_EQ(run_cli({"frobnicate"}), kUsage);
  EXPECT_EQ(run_cli({"validate"}), kUsage);
  EXPECT_EQ(run_cli({"validate", "--config", (dir_ / "missing.cfg").string()}), kUsage);
  EXPECT_EQ(run_cli({"entropy", "--config", write("a.cfg", reference(4, 4)), "--placement", "middle"}), kUsage);
}

TEST(ConfigParse, FullFile) {
  std::istringstream in(
      "# comment\n[model]\nlambda = 4, 1, 0.5\nq = 1, 0.1\nmode = permissive\n"
      "[geometry]\nn_x = 32\nn_y = 64\n"
      "[block]\nl_x = 4\nl_y = 3\nplacement = offset=5\nchains = 0, 7, 9\n"
      "[run]\ngrid = lx=2,4;ly=8,16,32\nquadrature_points = 1024\nthreads = 2\nbits = true\n");
  const RunConfig cfg = parse_config(in);
  EXPECT_EQ(cfg.lambda, (std::vector<double>{4, 1, 0.5}));
  EXPECT_EQ(cfg.mode, ValidationMode::Permissive);
  EXPECT_EQ(cfg.n_y, 64);
  ASSERT_TRUE(cfg.block.has_value());
  EXPECT_EQ(cfg.block->chains, (std::vector<int>{0, 7, 9}));
  EXPECT_EQ(cfg.placement, Placement::offset(5));
  ASSERT_TRUE(cfg.grid.has_value());
  EXPECT_EQ(cfg.grid->l_y, (std::vector<int>{8, 16, 32}));
  EXPECT_EQ(cfg.quadrature_points, 1024);
  EXPECT_EQ(cfg.threads, 2);
  EXPECT_TRUE(cfg.bits);
}

TEST(ConfigParse, Rejections) {
  for (const char* text : {"lambda = 1\n", "[model]\nlambda = 4,\nq = 1\n[geometry]\nn_x=1\nn_y=2\n",
                           "[model]\nlambda = 4\nq = x\n[geometry]\nn_x=1\nn_y=2\n",
                           "[model]\nlambda = 4\nq = 1\n[geometry]\nn_x=1.5\nn_y=2\n",
                           "[model]\nlambda = 4\nq = 1\nmode = lax\n[geometry]\nn_x=1\nn_y=2\n",
                           "[model\n"}) {
    std::istringstream in(text);
    EXPECT_THROW(parse_config(in), ConfigError) << text;
  }
  EXPECT_THROW(parse_grid("lx=1;lx=2"), ConfigError);
  EXPECT_THROW(parse_placement("offset=-1"), ConfigError);
}

}  // namespace
}  // namespace chainent::cli
