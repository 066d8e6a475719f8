#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "cbo/engine.hpp"
#include "cbo/ensemble.hpp"
#include "cbo/objectives.hpp"

namespace cbo::mfa {

/// Consensus trajectory of a large-N run, standing in for the consensus point of
/// the mean-field law. `moment4_sup` is the largest moment4 statistic seen.
struct ReferenceRun {
  std::vector<Vec> trajectory;  // steps + 1 points
  double moment4_sup = 0.0;
};

/// Runs p.n_particles particles (the reference size) and records v_alpha at every step.
ReferenceRun reference_run(const InitDistribution& dist, const ObjectiveSpec& obj, const CboParams& p);

std::vector<Vec> reference_consensus_trajectory(const InitDistribution& dist, const ObjectiveSpec& obj,
                                                const CboParams& p);

struct CouplingRun {
  std::size_t n = 0;
  std::size_t n_ref = 0;
  std::vector<std::uint64_t> seeds;
  double err_sup = 0.0;              // max_i mean_seeds sup_t |V^i_t - Vbar^i_t|^2
  double err_sup_conditional = 0.0;  // same over replications with sup_t moment4 <= M; NaN if none
  double m_threshold = 0.0;
  double exceed_fraction = 0.0;
  std::vector<bool> exceeded;  // per seed, sup_t moment4(V, Vbar) > M
};

/// Instrumentation hooks for the Gaussian increments of the two coupled systems.
struct CouplingObserver {
  IncrementObserver interacting;
  IncrementObserver mean_field;
};

/// For each seed, evolves the interacting system and the mean-field surrogate (whose
/// particles follow `ref_traj` instead of their own consensus) from the same initial
/// draw with the same Brownian increments, and aggregates the coupling error.
CouplingRun coupled_error(const InitDistribution& dist, const ObjectiveSpec& obj, const CboParams& p,
                          std::span<const Vec> ref_traj, std::span<const std::uint64_t> seeds, double m_threshold,
                          std::size_t n_ref, const CouplingObserver& observer = {});

/// Least-squares slope of log(err) against log(n).
double loglog_slope(std::span<const double> ns, std::span<const double> errs);

struct SweepConfig {
  InitDistribution dist = GaussianIsotropic{{2.0}, 1.0};
  CboParams params;  // n_particles is ignored
  std::vector<std::size_t> ns{50, 100, 200, 400, 800};
  std::size_t n_ref = 10000;
  std::size_t replications = 32;
  std::optional<double> m_threshold;  // default: 10x the reference moment4 sup
};

struct SweepResult {
  std::vector<CouplingRun> runs;
  double slope = 0.0;
  double m_threshold = 0.0;
};

/// Derived replication seeds; never equal to the reference seed `base`.
std::vector<std::uint64_t> replication_seeds(std::uint64_t base, std::size_t count);

SweepResult mfa_sweep(const SweepConfig& config, const ObjectiveSpec& obj);

}  // namespace cbo::mfa
