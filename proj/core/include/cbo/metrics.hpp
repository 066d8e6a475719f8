#pragma once

#include <cstddef>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "cbo/ensemble.hpp"

namespace cbo {

/// V(rho) = 1/(2N) sum_i ||V^i - v*||^2.
double v_functional(const Ensemble& ens, std::span<const double> vstar);

/// Halved variance 1/(2N) sum_i ||V^i - mean||^2.
double variance(const Ensemble& ens);

/// Fraction of particles in the closed ball of radius r around v*.
double ball_mass(const Ensemble& ens, std::span<const double> vstar, double r);

/// 1/N sum_i max(||V^i||^4, ||Vbar^i||^4); without `ens_bar`, 1/N sum_i ||V^i||^4.
double moment4_stat(const Ensemble& ens, const Ensemble* ens_bar = nullptr);

/// (1/N) sum_i ||V^i - v*||_2, the first moment about v*.
double first_moment(const Ensemble& ens, std::span<const double> vstar);

struct MetricsRecord {
  double t = 0.0;
  double v_func = 0.0;
  double variance = 0.0;
  double w2_sq = 0.0;
  double consensus_dist = 0.0;
  std::vector<std::pair<double, double>> ball_mass;  // (radius, fraction), in plan order
  double moment4 = 0.0;

  friend bool operator==(const MetricsRecord&, const MetricsRecord&) = default;
};

struct MetricsSeries {
  std::vector<MetricsRecord> records;
  std::optional<double> endpoint_error;
  std::string config_digest;

  friend bool operator==(const MetricsSeries&, const MetricsSeries&) = default;
};

/// Which steps to record and which ball radii to track. `observer`, if set, sees
/// every recorded ensemble right after its record is built.
struct RecordingPlan {
  std::size_t every = 1;
  std::vector<double> ball_radii;
  std::function<void(const Ensemble&, const MetricsRecord&)> observer;
};

/// Builds the record for one ensemble. `vstar` may be empty when the objective
/// has no known minimizer; distance-based fields are then NaN.
MetricsRecord make_record(const Ensemble& ens, std::span<const double> vstar, std::span<const double> consensus,
                          const std::vector<double>& ball_radii);

struct TimeWindow {
  double begin = 0.0;
  double end = 0.0;
};

/// Least-squares slope of -log(y) against t over the points with t in [begin, end].
/// Positive means decay.
double fit_decay_rate(std::span<const std::pair<double, double>> series, TimeWindow window);

/// Pre-plateau window for a V-functional series: starts at the first record and
/// ends before V drops below 1e-6 V(0) or before the last 10% of records,
/// whichever comes first.
TimeWindow default_fit_window(const MetricsSeries& series);

/// Fitted decay rate of v_func over default_fit_window.
double fit_v_decay_rate(const MetricsSeries& series);

}  // namespace cbo
