#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "cbo/error.hpp"
#include "cbo/metrics.hpp"
#include "cbo/mfa.hpp"
#include "cbo/objectives.hpp"
#include "cbo/theory.hpp"
#include "csv.hpp"

namespace cbo::cli {

// ---- fig-variance: V and Var decay on 1-D Rastrigin for several initial means.

struct FigVarianceOptions {
  double scale = 1.0 / 16.0;  // N = round(320000 * scale)
  std::size_t steps = 800;
  std::uint64_t seed = 7;
  std::vector<double> mus{1.0, 2.0, 3.0, 4.0};
  double mass_radius = 0.1;
  double early_window = 0.5;  // variance-increase check looks at t in (0, early_window]
};

struct MassBoundPoint {
  double t = 0.0;
  double empirical = 0.0;  // 1/N sum_i phi_r(V^i_t)
  double bound = 0.0;      // empirical(0) e^{-q t}
  double std_error = 0.0;  // sqrt(bound (1 - bound) / N)
  bool ok = true;          // empirical >= bound - 3 std_error
};

struct FigVarianceRun {
  double mu = 0.0;
  MetricsSeries series;
  TimeWindow window;
  double rate = 0.0;
  bool variance_increase = false;
  double b_bound = 0.0;  // sup_t |v_alpha - v*|
  double q = 0.0;
  std::vector<MassBoundPoint> mass_audit;
  bool mass_ok = true;
  std::optional<Error> failure;
};

struct FigVarianceResult {
  std::size_t n_particles = 0;
  double theoretical_rate = 0.0;
  std::vector<FigVarianceRun> runs;
};

FigVarianceResult run_fig_variance(const FigVarianceOptions& options);

/// Writes mu_<k>/metrics.csv, mu_<k>/summary.txt, mu_<k>/mass_bound.csv and summary.txt.
void write_fig_variance(const FigVarianceResult& result, const FigVarianceOptions& options, const std::string& dir);

// ---- fig-trajectories: three tracked agents on 2-D Rastrigin.

struct FigTrajectoriesOptions {
  std::size_t runs = 100;
  std::size_t n_particles = 4000;  // sampled agents; the tracked ones come on top
  std::size_t steps = 800;
  std::uint64_t seed = 1;
  double sigma = 0.1;
};

using Point2 = std::array<double, 2>;

inline const std::array<Point2, 3> kTrackedAgents{{{-2.0, 4.0}, {-1.5, -1.5}, {4.5, 1.5}}};

struct AgentSummary {
  Point2 start{};
  double max_deviation_ratio = 0.0;  // max_t dist(mean path, chord start -> v*) / |start - v*|
  double end_distance = 0.0;         // |mean path at T - v*|
};

struct FigTrajectoriesResult {
  std::size_t n_particles = 0;
  double dt = 0.0;
  std::vector<std::vector<std::vector<Point2>>> paths;  // [run][agent][step]
  std::vector<std::vector<Point2>> mean_paths;          // [agent][step]
  std::vector<AgentSummary> agents;
};

FigTrajectoriesResult run_fig_trajectories(const FigTrajectoriesOptions& options);

/// Writes trajectories.csv (run,agent,t,x,y), mean_trajectories.csv (agent,t,x,y) and summary.txt.
void write_fig_trajectories(const FigTrajectoriesResult& result, const std::string& dir);

// ---- mfa-sweep and laplace-audit.

void write_mfa_sweep(const mfa::SweepResult& result, const std::string& dir);
KeyValues laplace_audit_summary(const theory::LaplaceAuditResult& result);

}  // namespace cbo::cli
