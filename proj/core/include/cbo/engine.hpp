#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "cbo/ensemble.hpp"
#include "cbo/error.hpp"
#include "cbo/metrics.hpp"
#include "cbo/objectives.hpp"

namespace cbo {

/// H = 1 everywhere: the drift is always active.
struct ConstOne {};

/// H(x) = 1 for x >= 0 and max(0, 1 + x/delta) below; Lipschitz with constant 1/delta.
struct RampHeaviside {
  double delta = 1.0;
};

using HVariant = std::variant<ConstOne, RampHeaviside>;

double h_eval(const HVariant& h, double x) noexcept;

struct CboParams {
  double lambda = 1.0;
  double sigma = 0.0;
  double alpha = 1.0;
  double dt = 0.01;
  std::size_t steps = 0;
  std::size_t n_particles = 1;
  std::size_t dim = 1;
  HVariant h = ConstOne{};
  std::uint64_t seed = 0;

  /// 2 lambda > d sigma^2, the regime where V decays.
  bool contractive() const noexcept { return 2.0 * lambda > static_cast<double>(dim) * sigma * sigma; }

  /// Throws kInvalidConfig on out-of-range scalars.
  void validate() const;
};

/// E at every particle. A non-finite value raises kNumericDomain with the particle index.
std::vector<double> energies(const Ensemble& ens, const ObjectiveSpec& obj);

/// Weighted mean with weights exp(-alpha (E(V^i) - min_j E(V^j))). Shifting by the
/// minimum leaves the value unchanged but keeps the minimizing weight at 1, so huge
/// alpha degrades gracefully to the average of the energy-minimizing particles.
Vec consensus_point(const Ensemble& ens, std::span<const double> energy, double alpha);
Vec consensus_point(const Ensemble& ens, const ObjectiveSpec& obj, double alpha);

/// Called once per particle per step with the Gaussian increment it received.
using IncrementObserver = std::function<void(std::size_t particle, std::size_t step, std::span<const double> increment)>;

/// One Euler-Maruyama step with the consensus computed from `ens` itself.
/// `step` indexes the random substreams; time advances by dt.
Ensemble cbo_step(const Ensemble& ens, const ObjectiveSpec& obj, const CboParams& p, std::size_t step,
                  const IncrementObserver& observer = {});

/// One Euler-Maruyama step toward an externally supplied consensus point. Used for
/// pinned-consensus checks and for the mean-field surrogate system.
Ensemble cbo_step_with_consensus(const Ensemble& ens, const ObjectiveSpec& obj, const CboParams& p, std::size_t step,
                                 std::span<const double> consensus, const IncrementObserver& observer = {});

struct SimulationResult {
  MetricsSeries series;
  Ensemble final_ensemble;
  /// Set when a step failed; `series` then holds the records up to the failure.
  std::optional<Error> failure;
};

/// Samples rho_0, runs p.steps steps and records metrics per the plan.
SimulationResult simulate(const InitDistribution& dist, const ObjectiveSpec& obj, const CboParams& p,
                          const RecordingPlan& plan);

/// Same, starting from a given ensemble.
SimulationResult simulate_from(Ensemble initial, const ObjectiveSpec& obj, const CboParams& p,
                               const RecordingPlan& plan);

/// Stable hex digest of everything that determines a run.
std::string config_digest(const InitDistribution& dist, const ObjectiveSpec& obj, const CboParams& p);

}  // namespace cbo
