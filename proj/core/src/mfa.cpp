#include "cbo/mfa.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "cbo/error.hpp"
#include "cbo/metrics.hpp"
#include "cbo/parallel.hpp"
#include "cbo/rng.hpp"

namespace cbo::mfa {

ReferenceRun reference_run(const InitDistribution& dist, const ObjectiveSpec& obj, const CboParams& p) {
  p.validate();
  ReferenceRun ref;
  ref.trajectory.reserve(p.steps + 1);
  Ensemble ens = sample_initial(dist, p.n_particles, p.dim, p.seed);
  for (std::size_t k = 0;; ++k) {
    const auto e = energies(ens, obj);
    ref.trajectory.push_back(consensus_point(ens, e, p.alpha));
    ref.moment4_sup = std::max(ref.moment4_sup, moment4_stat(ens));
    if (k == p.steps) break;
    ens = cbo_step_with_consensus(ens, obj, p, k, ref.trajectory.back());
  }
  return ref;
}

std::vector<Vec> reference_consensus_trajectory(const InitDistribution& dist, const ObjectiveSpec& obj,
                                                const CboParams& p) {
  return reference_run(dist, obj, p).trajectory;
}

namespace {

struct Replication {
  std::vector<double> sup_err;  // per particle
  double moment4_sup = 0.0;
};

Replication run_replication(const InitDistribution& dist, const ObjectiveSpec& obj, CboParams p,
                            std::span<const Vec> ref_traj, std::uint64_t seed, const CouplingObserver& observer) {
  p.seed = seed;
  Ensemble interacting = sample_initial(dist, p.n_particles, p.dim, seed);
  Ensemble mean_field = interacting;
  Replication rep;
  rep.sup_err.assign(p.n_particles, 0.0);
  rep.moment4_sup = moment4_stat(interacting, &mean_field);
  for (std::size_t k = 0; k < p.steps; ++k) {
    interacting = cbo_step(interacting, obj, p, k, observer.interacting);
    mean_field = cbo_step_with_consensus(mean_field, obj, p, k, ref_traj[k], observer.mean_field);
    for (std::size_t i = 0; i < p.n_particles; ++i) {
      double s = 0.0;
      for (std::size_t j = 0; j < p.dim; ++j) {
        const double diff = interacting[i][j] - mean_field[i][j];
        s += diff * diff;
      }
      rep.sup_err[i] = std::max(rep.sup_err[i], s);
    }
    rep.moment4_sup = std::max(rep.moment4_sup, moment4_stat(interacting, &mean_field));
  }
  return rep;
}

}  // namespace

CouplingRun coupled_error(const InitDistribution& dist, const ObjectiveSpec& obj, const CboParams& p,
                          std::span<const Vec> ref_traj, std::span<const std::uint64_t> seeds, double m_threshold,
                          std::size_t n_ref, const CouplingObserver& observer) {
  p.validate();
  if (ref_traj.size() != p.steps + 1) {
    throw Error(ErrorKind::kInvalidInput, "reference trajectory has " + std::to_string(ref_traj.size()) +
                                              " points, expected " + std::to_string(p.steps + 1));
  }
  if (seeds.empty()) throw Error(ErrorKind::kInvalidInput, "coupled_error needs at least one seed");

  std::vector<Replication> reps(seeds.size());
  parallel_for(seeds.size(), [&](std::size_t s) {
    reps[s] = run_replication(dist, obj, p, ref_traj, seeds[s], observer);
  });

  CouplingRun run;
  run.n = p.n_particles;
  run.n_ref = n_ref;
  run.seeds.assign(seeds.begin(), seeds.end());
  run.m_threshold = m_threshold;

  std::vector<double> mean_all(p.n_particles, 0.0);
  std::vector<double> mean_kept(p.n_particles, 0.0);
  std::size_t kept = 0;
  for (const auto& rep : reps) {
    const bool exceeded = rep.moment4_sup > m_threshold;
    run.exceeded.push_back(exceeded);
    for (std::size_t i = 0; i < p.n_particles; ++i) {
      mean_all[i] += rep.sup_err[i];
      if (!exceeded) mean_kept[i] += rep.sup_err[i];
    }
    if (!exceeded) ++kept;
  }
  const double count = static_cast<double>(reps.size());
  run.exceed_fraction = static_cast<double>(reps.size() - kept) / count;
  run.err_sup = *std::max_element(mean_all.begin(), mean_all.end()) / count;
  run.err_sup_conditional = kept == 0 ? std::numeric_limits<double>::quiet_NaN()
                                      : *std::max_element(mean_kept.begin(), mean_kept.end()) /
                                            static_cast<double>(kept);
  return run;
}

double loglog_slope(std::span<const double> ns, std::span<const double> errs) {
  if (ns.size() != errs.size()) throw Error(ErrorKind::kInvalidInput, "loglog_slope: size mismatch");
  if (ns.size() < 2) throw Error(ErrorKind::kInvalidInput, "loglog_slope: need at least two points");
  double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
  for (std::size_t k = 0; k < ns.size(); ++k) {
    if (!(ns[k] > 0.0) || !(errs[k] > 0.0)) throw Error(ErrorKind::kInvalidInput, "loglog_slope: nonpositive value");
    const double x = std::log(ns[k]);
    const double y = std::log(errs[k]);
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
  }
  const double n = static_cast<double>(ns.size());
  const double denom = n * sxx - sx * sx;
  if (denom == 0.0) throw Error(ErrorKind::kInvalidInput, "loglog_slope: all n equal");
  return (n * sxy - sx * sy) / denom;
}

std::vector<std::uint64_t> replication_seeds(std::uint64_t base, std::size_t count) {
  std::vector<std::uint64_t> seeds;
  seeds.reserve(count);
  for (std::uint64_t r = 0; seeds.size() < count; ++r) {
    const std::uint64_t s = Substream::mix(base ^ Substream::mix(r + 1));
    if (s != base) seeds.push_back(s);
  }
  return seeds;
}

SweepResult mfa_sweep(const SweepConfig& config, const ObjectiveSpec& obj) {
  if (config.ns.size() < 3) throw Error(ErrorKind::kInvalidConfig, "mfa sweep needs at least 3 particle counts");
  const std::size_t max_n = *std::max_element(config.ns.begin(), config.ns.end());
  if (config.n_ref < 10 * max_n) throw Error(ErrorKind::kInvalidConfig, "n_ref must be at least 10x the largest N");
  if (config.replications == 0) throw Error(ErrorKind::kInvalidConfig, "mfa sweep needs at least one replication");

  CboParams ref_params = config.params;
  ref_params.n_particles = config.n_ref;
  const ReferenceRun ref = reference_run(config.dist, obj, ref_params);

  SweepResult result;
  result.m_threshold = config.m_threshold.value_or(10.0 * ref.moment4_sup);
  const auto seeds = replication_seeds(config.params.seed, config.replications);

  std::vector<double> ns, errs;
  for (std::size_t n : config.ns) {
    CboParams p = config.params;
    p.n_particles = n;
    result.runs.push_back(coupled_error(config.dist, obj, p, ref.trajectory, seeds, result.m_threshold, config.n_ref));
    ns.push_back(static_cast<double>(n));
    errs.push_back(result.runs.back().err_sup);
  }
  result.slope = loglog_slope(ns, errs);
  return result;
}

}  // namespace cbo::mfa
