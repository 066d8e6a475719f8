#include <algorithm>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <gtest/gtest.h>

#include "cli/app.hpp"
#include "cli/csv.hpp"

namespace cbo::cli {
namespace {

namespace fs = std::filesystem;

class AppTest : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = fs::temp_directory_path() /
           ("cbo_app_" + std::string(::testing::UnitTest::GetInstance()->current_test_info()->name()));
    fs::remove_all(dir_);
    fs::create_directories(dir_);
  }
  void TearDown() override { fs::remove_all(dir_); }

  std::string path(const std::string& name) const { return (dir_ / name).string(); }

  std::string write_config(const std::string& name, const std::string& body) const {
    std::ofstream(path(name)) << body;
    return path(name);
  }

  int run(std::vector<std::string> args) {
    args.insert(args.begin(), "cbo");
    std::vector<const char*> argv;
    for (const auto& a : args) argv.push_back(a.c_str());
    out_.str("");
    err_.str("");
    return run_app(static_cast<int>(argv.size()), argv.data(), out_, err_);
  }

  static std::string slurp(const std::string& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream s;
    s << in.rdbuf();
    return s.str();
  }

  static std::size_t lines(const std::string& p) {
    const auto s = slurp(p);
    return static_cast<std::size_t>(std::count(s.begin(), s.end(), '\n'));
  }

  std::string basic_config(std::size_t steps, const std::string& out, const std::string& extra = "") const {
    return R"({
  "objective": {"name": "rastrigin", "dim": 1},
  "init": {"kind": "gaussian", "mean": [1.0], "variance": 0.8},
  "params": {"lambda": 1, "sigma": 0.5, "alpha": 1e15, "dt": 0.01, "steps": )" +
           std::to_string(steps) + R"(, "n_particles": 300, "seed": 11},
  "recording": {"every": 1, "ball_radii": [0.1]},)" +
           extra + R"(
  "outputs": ")" + path(out) + R"("
})";
  }

  fs::path dir_;
  std::ostringstream out_, err_;
};

TEST_F(AppTest, ZeroStepsWritesOneDataRow) {
  const auto cfg = write_config("k0.json", basic_config(0, "k0"));
  ASSERT_EQ(run({"run", cfg}), kExitOk) << err_.str();
  EXPECT_EQ(lines(path("k0/metrics.csv")), 2u);
  EXPECT_EQ(slurp(path("k0/metrics.csv")).rfind("t,v_func,variance,w2_sq,consensus_dist,ball_mass_0.1,moment4\n", 0), 0u);
}

TEST_F(AppTest, RepeatedRunIsByteIdentical) {
  const auto a = write_config("a.json", basic_config(60, "a"));
  const auto b = write_config("b.json", basic_config(60, "b"));
  ASSERT_EQ(run({"run", a}), kExitOk);
  ASSERT_EQ(run({"run", b}), kExitOk);
  EXPECT_EQ(slurp(path("a/metrics.csv")), slurp(path("b/metrics.csv")));
  EXPECT_EQ(lines(path("a/metrics.csv")), 62u);

  std::ifstream in(path("a/summary.txt"));
  const auto kv = read_key_values(in);
  std::vector<std::string> keys;
  for (const auto& [k, v] : kv) keys.push_back(k);
  for (const char* want : {"config_digest", "endpoint_error", "decay_rate", "theoretical_rate", "window", "status"}) {
    EXPECT_NE(std::find(keys.begin(), keys.end(), want), keys.end()) << want;
  }
}

TEST_F(AppTest, ConfigErrorExitsTwoWithLine) {
  const auto cfg = write_config("bad.json", "{\n  \"objective\": {\"name\": \"rastrigin\"},\n  \"recording\": {\"evry\": 2}\n}\n");
  EXPECT_EQ(run({"run", cfg}), kExitConfig);
  EXPECT_NE(err_.str().find("line 3"), std::string::npos) << err_.str();
  EXPECT_EQ(run({"run", path("missing.json")}), kExitConfig);
  EXPECT_EQ(run({"bogus-command"}), kExitConfig);
}

TEST_F(AppTest, DivergenceExitsThreeAfterWritingPartialCsv) {
  const auto cfg = write_config("div.json", R"({
  "objective": {"name": "quadratic", "dim": 1},
  "init": {"kind": "gaussian", "mean": [3.0], "variance": 1.0},
  "params": {"lambda": 1, "sigma": 0, "alpha": 1, "dt": 50, "steps": 500, "n_particles": 20},
  "outputs": ")" + path("div") + R"("
})");
  EXPECT_EQ(run({"run", cfg}), kExitDivergence);
  EXPECT_GE(lines(path("div/metrics.csv")), 2u);
  EXPECT_NE(slurp(path("div/summary.txt")).find("status=failed"), std::string::npos);
}

TEST_F(AppTest, TheoryReport) {
  const auto cfg = write_config("t.json", basic_config(10, "t"));
  ASSERT_EQ(run({"theory", cfg}), kExitOk) << err_.str();
  std::istringstream in(out_.str());
  const auto kv = read_key_values(in);
  auto get = [&](const std::string& k) {
    for (const auto& [key, v] : kv) {
      if (key == k) return v;
    }
    return std::string("<missing>");
  };
  EXPECT_EQ(get("c").substr(0, 12), "0.6180339887");
  for (const char* k : {"q", "t_star", "alpha0", "b1", "b2", "wellprep_cond1", "wellprep_cond2"}) {
    EXPECT_NE(get(k), "<missing>") << k;
  }
  EXPECT_EQ(get("metadata_is_heuristic"), "true");

  const auto zero = write_config("z.json", R"({"objective": {"name": "quadratic"}, "params": {"sigma": 0, "n_particles": 100}})");
  ASSERT_EQ(run({"theory", zero}), kExitOk) << err_.str();
  EXPECT_NE(out_.str().find("q=infinite (sigma=0)"), std::string::npos);

  const auto hot = write_config("h.json", R"({"objective": {"name": "quadratic"}, "params": {"sigma": 3, "n_particles": 100}})");
  EXPECT_EQ(run({"theory", hot}), kExitTheory);
  EXPECT_NE(err_.str().find("params.sigma"), std::string::npos) << err_.str();
  const auto eps = write_config("e.json", R"({"objective": {"name": "quadratic"}, "params": {"sigma": 0.5, "n_particles": 100}, "theory": {"eps": 1e9}})");
  EXPECT_EQ(run({"theory", eps}), kExitTheory);
}

TEST_F(AppTest, FigVarianceFansOutPerMu) {
  ASSERT_EQ(run({"preset", "fig-variance", "--scale", "0.001", "--steps", "30", "--out", path("fv")}), kExitOk)
      << err_.str();
  for (int k = 1; k <= 4; ++k) {
    const auto csv = path("fv/mu_" + std::to_string(k) + "/metrics.csv");
    ASSERT_TRUE(fs::exists(csv)) << csv;
    EXPECT_EQ(lines(csv), 32u);
    EXPECT_TRUE(fs::exists(path("fv/mu_" + std::to_string(k) + "/mass_bound.csv")));
  }
  EXPECT_NE(slurp(path("fv/summary.txt")).find("theoretical_rate=1.75"), std::string::npos);
  EXPECT_EQ(run({"preset", "fig-variance", "--scale", "0", "--out", path("fv0")}), kExitConfig);
}

TEST_F(AppTest, FigTrajectoriesMinimalRun) {
  ASSERT_EQ(run({"preset", "fig-trajectories", "--runs", "2", "--particles", "50", "--steps", "20", "--out",
                 path("ft")}),
            kExitOk)
      << err_.str();
  EXPECT_EQ(lines(path("ft/trajectories.csv")), 1u + 2u * 3u * 21u);
  EXPECT_EQ(lines(path("ft/mean_trajectories.csv")), 1u + 3u * 21u);
  EXPECT_EQ(slurp(path("ft/trajectories.csv")).rfind("run,agent,t,x,y\n0,0,0,-2,4\n", 0), 0u);
  EXPECT_EQ(run({"preset", "fig-trajectories", "--runs", "1", "--out", path("ft1")}), kExitConfig);
}

TEST_F(AppTest, PresetsAreReproducible) {
  for (const char* out : {"p1", "p2"}) {
    ASSERT_EQ(run({"preset", "fig-trajectories", "--runs", "2", "--particles", "40", "--steps", "10", "--out", path(out)}),
              kExitOk);
  }
  EXPECT_EQ(slurp(path("p1/trajectories.csv")), slurp(path("p2/trajectories.csv")));
}

TEST_F(AppTest, MfaSweepWritesTable) {
  const auto cfg = write_config("m.json", R"({
  "objective": {"name": "quadratic", "dim": 1},
  "init": {"kind": "gaussian", "mean": [2.0], "variance": 1.0},
  "params": {"lambda": 1, "sigma": 0.5, "alpha": 10, "dt": 0.01, "steps": 20, "seed": 1},
  "mfa": {"ns": [10, 20, 40], "n_ref": 400, "replications": 3},
  "outputs": ")" + path("m") + R"("
})");
  ASSERT_EQ(run({"preset", "mfa-sweep", cfg}), kExitOk) << err_.str();
  const auto csv = slurp(path("m/mfa_sweep.csv"));
  EXPECT_EQ(csv.rfind("N,err_sup,err_sup_conditional,exceed_fraction,seeds\n10,", 0), 0u);
  EXPECT_EQ(lines(path("m/mfa_sweep.csv")), 4u);
  EXPECT_NE(slurp(path("m/summary.txt")).find("slope="), std::string::npos);
}

TEST_F(AppTest, LaplaceAuditReportsViolations) {
  const auto cfg = write_config("l.json", R"({"audit": {"measures": 20}, "outputs": ")" + path("l") + R"("})");
  ASSERT_EQ(run({"preset", "laplace-audit", cfg}), kExitOk) << err_.str();
  EXPECT_NE(out_.str().find("violations=0"), std::string::npos);
}

TEST_F(AppTest, RunDispatchesPresetFromConfig) {
  const auto cfg = write_config("r.json", R"({"preset": "laplace-audit", "audit": {"measures": 5}, "outputs": ")" +
                                              path("r") + R"("})");
  ASSERT_EQ(run({"run", cfg}), kExitOk) << err_.str();
  EXPECT_TRUE(fs::exists(path("r/summary.txt")));
}

}  // namespace
}  // namespace cbo::cli
