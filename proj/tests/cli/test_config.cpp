#include <gtest/gtest.h>

#include "cli/config.hpp"

namespace cbo::cli {
namespace {

std::size_t error_line(const std::string& text) {
  try {
    (void)parse_config(text);
  } catch (const ConfigError& e) {
    return e.line();
  }
  ADD_FAILURE() << "config accepted: " << text;
  return 0;
}

TEST(Config, FullDocument) {
  const auto cfg = parse_config(R"({
  "objective": {"name": "quadratic", "dim": 2, "center": [1, -1]},
  "init": {"kind": "uniform", "lo": [-3, -3], "hi": [3, 3]},
  "params": {"lambda": 1.5, "sigma": 0.2, "alpha": 1e15, "dt": 0.02, "steps": 7, "n_particles": 33,
             "dim": 2, "h_variant": {"kind": "ramp", "delta": 0.25}, "seed": 18446744073709551615},
  "recording": {"every": 3, "ball_radii": [0.1, 1]},
  "outputs": "somewhere",
  "preset": "laplace-audit",
  "theory": {"eps": 0.001, "tau": 0.5, "mass_radius": 0.2, "b_bound": 3, "laplace_q": 0.3, "laplace_r": 0.4},
  "mfa": {"ns": [10, 20, 40], "n_ref": 400, "replications": 3, "m_threshold": 12.5},
  "audit": {"measures": 5, "max_particles": 50, "max_dim": 2, "min_inside": 10, "seed": 3}
})");
  EXPECT_EQ(cfg.objective.name, "quadratic");
  EXPECT_EQ(cfg.objective.center, (Vec{1.0, -1.0}));
  const auto& box = std::get<UniformBox>(cfg.init);
  EXPECT_EQ(box.hi, (Vec{3.0, 3.0}));
  EXPECT_EQ(cfg.params.alpha, 1e15);
  EXPECT_EQ(cfg.params.steps, 7u);
  EXPECT_EQ(cfg.params.dim, 2u);
  EXPECT_EQ(cfg.params.seed, 18446744073709551615ULL);
  EXPECT_EQ(std::get<RampHeaviside>(cfg.params.h).delta, 0.25);
  EXPECT_EQ(cfg.recording.every, 3u);
  EXPECT_EQ(cfg.outputs, "somewhere");
  EXPECT_EQ(cfg.preset, Preset::kLaplaceAudit);
  EXPECT_EQ(cfg.theory.b_bound, 3.0);
  EXPECT_EQ(cfg.mfa.ns, (std::vector<std::size_t>{10, 20, 40}));
  EXPECT_EQ(cfg.mfa.params.n_particles, 33u);
  EXPECT_EQ(cfg.mfa.m_threshold, 12.5);
  EXPECT_EQ(cfg.audit.max_dim, 2u);
  EXPECT_EQ(cfg.make_plan().ball_radii, (std::vector<double>{0.1, 1.0}));
  EXPECT_EQ(cfg.make_objective().dim, 2u);
}

TEST(Config, Defaults) {
  const auto cfg = parse_config("{}");
  EXPECT_EQ(cfg.objective.name, "rastrigin");
  EXPECT_EQ(cfg.objective.dim, 1u);
  EXPECT_EQ(std::get<GaussianIsotropic>(cfg.init).mean, Vec{0.0});
  EXPECT_FALSE(cfg.preset);
  EXPECT_TRUE(std::holds_alternative<ConstOne>(parse_config(R"({"params": {"h_variant": "const_one"}})").params.h));
}

TEST(Config, ErrorsPointAtTheLine) {
  EXPECT_EQ(error_line("{\n  \"objective\": {\"name\": \"rastrigin\"},\n  \"bogus\": 1\n}"), 3u);
  EXPECT_EQ(error_line("{\n  \"recording\": {\n    \"every\": 0\n  }\n}"), 3u);
  EXPECT_EQ(error_line("{\n  \"params\": {\n    \"alpha\": ,\n  }\n}"), 3u);
  EXPECT_EQ(error_line("{\n  \"objective\": {\"name\": \"ackley\"}\n}"), 2u);
  EXPECT_EQ(error_line("{\n\n  \"params\": {\"steps\": -3}\n}"), 3u);
  EXPECT_EQ(error_line("{\n  \"objective\": {\"dim\": 2},\n  \"init\": {\"mean\": [0]}\n}"), 3u);
  EXPECT_EQ(error_line("{\n  \"init\": {\"kind\": \"uniform\", \"lo\": [1], \"hi\": [1]}\n}"), 2u);
  EXPECT_EQ(error_line("{\"params\": {\"h_variant\": {\"kind\": \"ramp\", \"delta\": 0}}}"), 1u);
  EXPECT_EQ(error_line("{\"preset\": \"fig-3\"}"), 1u);
  EXPECT_EQ(error_line("[1, 2]"), 1u);
  EXPECT_EQ(error_line("{\n \"params\": {\"seed\": 1.5}\n}"), 2u);
}

TEST(Config, MissingFile) { EXPECT_THROW((void)load_config("/nonexistent/cfg.json"), ConfigError); }

TEST(Config, PresetNames) {
  for (auto p : {Preset::kFigVariance, Preset::kFigTrajectories, Preset::kMfaSweep, Preset::kLaplaceAudit}) {
    EXPECT_EQ(parse_config(std::string("{\"preset\": \"") + preset_name(p) + "\"}").preset, p);
  }
}

}  // namespace
}  // namespace cbo::cli
