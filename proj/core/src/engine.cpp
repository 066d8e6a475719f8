#include "cbo/engine.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <limits>
#include <utility>

#include "cbo/parallel.hpp"
#include "cbo/rng.hpp"

namespace cbo {

double h_eval(const HVariant& h, double x) noexcept {
  if (std::holds_alternative<ConstOne>(h)) return 1.0;
  if (x >= 0.0) return 1.0;
  const double delta = std::get<RampHeaviside>(h).delta;
  return std::max(0.0, 1.0 + x / delta);
}

void CboParams::validate() const {
  auto fail = [](const std::string& what) { throw Error(ErrorKind::kInvalidConfig, what); };
  if (!(lambda >= 0.0) || !std::isfinite(lambda)) fail("lambda must be nonnegative and finite");
  if (!(sigma >= 0.0) || !std::isfinite(sigma)) fail("sigma must be nonnegative and finite");
  if (!(alpha > 0.0) || !std::isfinite(alpha)) fail("alpha must be positive and finite");
  if (!(dt > 0.0) || !std::isfinite(dt)) fail("dt must be positive and finite");
  if (n_particles == 0) fail("n_particles must be positive");
  if (dim == 0) fail("dim must be positive");
  if (const auto* ramp = std::get_if<RampHeaviside>(&h); ramp && !(ramp->delta > 0.0)) {
    fail("ramp delta must be positive");
  }
}

std::vector<double> energies(const Ensemble& ens, const ObjectiveSpec& obj) {
  if (obj.dim != ens.dim()) throw Error(ErrorKind::kInvalidDimension, "objective and ensemble dimensions differ");
  std::vector<double> e(ens.size());
  for (std::size_t i = 0; i < ens.size(); ++i) {
    e[i] = obj(ens[i]);
    if (!std::isfinite(e[i])) {
      throw Error(ErrorKind::kNumericDomain, "non-finite energy at particle " + std::to_string(i), i);
    }
  }
  return e;
}

Vec consensus_point(const Ensemble& ens, std::span<const double> energy, double alpha) {
  const std::size_t n = ens.size();
  const std::size_t d = ens.dim();
  if (n == 0) throw Error(ErrorKind::kInvalidInput, "consensus of an empty ensemble");
  for (std::size_t i = 0; i < n; ++i) {
    if (!std::isfinite(energy[i])) {
      throw Error(ErrorKind::kNumericDomain, "non-finite energy at particle " + std::to_string(i), i);
    }
  }
  const double e_min = *std::min_element(energy.begin(), energy.end());

  Vec num(d, 0.0);
  Vec lo(ens[0].begin(), ens[0].end());
  Vec hi = lo;
  double denom = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double w = std::exp(-alpha * (energy[i] - e_min));
    const auto row = ens[i];
    for (std::size_t k = 0; k < d; ++k) {
      num[k] += w * row[k];
      lo[k] = std::min(lo[k], row[k]);
      hi[k] = std::max(hi[k], row[k]);
    }
    denom += w;
  }
  // denom >= 1 since the minimizing particle has weight exp(0).
  // Rounding in the quotient can land one ulp outside the hull of the particles.
  for (std::size_t k = 0; k < d; ++k) num[k] = std::clamp(num[k] / denom, lo[k], hi[k]);
  return num;
}

Vec consensus_point(const Ensemble& ens, const ObjectiveSpec& obj, double alpha) {
  const auto e = energies(ens, obj);
  return consensus_point(ens, e, alpha);
}

namespace {

Ensemble advance(const Ensemble& ens, const std::vector<double>* energy, const ObjectiveSpec& obj,
                 const CboParams& p, std::size_t step, std::span<const double> consensus,
                 const IncrementObserver& observer) {
  const std::size_t n = ens.size();
  const std::size_t d = ens.dim();
  if (consensus.size() != d) throw Error(ErrorKind::kInvalidDimension, "consensus point has wrong dimension");

  const bool need_h = !std::holds_alternative<ConstOne>(p.h);
  double e_consensus = 0.0;
  std::vector<double> own_energy;
  if (need_h) {
    e_consensus = obj(consensus);
    if (energy == nullptr) {
      own_energy = energies(ens, obj);
      energy = &own_energy;
    }
  }

  Ensemble next(n, d, static_cast<double>(step + 1) * p.dt);
  parallel_for(n, [&](std::size_t i) {
    const auto v = ens[i];
    auto out = next[i];
    double diff_sq = 0.0;
    for (std::size_t k = 0; k < d; ++k) {
      const double diff = v[k] - consensus[k];
      diff_sq += diff * diff;
    }
    const double h = need_h ? h_eval(p.h, (*energy)[i] - e_consensus) : 1.0;
    const double drift = p.dt * p.lambda * h;
    for (std::size_t k = 0; k < d; ++k) out[k] = v[k] - drift * (v[k] - consensus[k]);
    if (p.sigma > 0.0) {
      thread_local std::vector<double> increment;
      increment.resize(d);
      gaussian_increment(p.seed, i, step, p.dt, increment);
      if (observer) observer(i, step, increment);
      const double scale = p.sigma * std::sqrt(diff_sq);
      for (std::size_t k = 0; k < d; ++k) out[k] += scale * increment[k];
    }
    for (std::size_t k = 0; k < d; ++k) {
      if (!std::isfinite(out[k])) {
        throw Error(ErrorKind::kDivergence,
                    "non-finite position of particle " + std::to_string(i) + " after step " + std::to_string(step),
                    step);
      }
    }
  });
  return next;
}

std::string fmt_double(double x) {
  char buf[32];
  auto [end, ec] = std::to_chars(buf, buf + sizeof(buf), x);
  return std::string(buf, end);
}

std::uint64_t fnv1a(const std::string& s) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : s) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

std::string describe(const ObjectiveSpec& obj, const CboParams& p) {
  std::string s = obj.name + "|d=" + std::to_string(obj.dim);
  if (obj.minimizer) {
    s += "|vstar=";
    for (double x : *obj.minimizer) s += fmt_double(x) + ",";
  }
  s += "|lambda=" + fmt_double(p.lambda) + "|sigma=" + fmt_double(p.sigma) + "|alpha=" + fmt_double(p.alpha) +
       "|dt=" + fmt_double(p.dt) + "|K=" + std::to_string(p.steps) + "|N=" + std::to_string(p.n_particles) +
       "|seed=" + std::to_string(p.seed);
  if (const auto* ramp = std::get_if<RampHeaviside>(&p.h)) s += "|ramp=" + fmt_double(ramp->delta);
  return s;
}

std::string hex(std::uint64_t h) {
  char buf[17];
  std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

}  // namespace

Ensemble cbo_step(const Ensemble& ens, const ObjectiveSpec& obj, const CboParams& p, std::size_t step,
                  const IncrementObserver& observer) {
  const auto e = energies(ens, obj);
  const Vec c = consensus_point(ens, e, p.alpha);
  return advance(ens, &e, obj, p, step, c, observer);
}

Ensemble cbo_step_with_consensus(const Ensemble& ens, const ObjectiveSpec& obj, const CboParams& p, std::size_t step,
                                 std::span<const double> consensus, const IncrementObserver& observer) {
  return advance(ens, nullptr, obj, p, step, consensus, observer);
}

SimulationResult simulate_from(Ensemble initial, const ObjectiveSpec& obj, const CboParams& p,
                               const RecordingPlan& plan) {
  p.validate();
  if (initial.dim() != obj.dim || initial.dim() != p.dim) {
    throw Error(ErrorKind::kInvalidConfig, "objective, parameter and ensemble dimensions differ");
  }
  if (plan.every == 0) throw Error(ErrorKind::kInvalidConfig, "recording stride must be at least 1");

  SimulationResult result;
  result.series.config_digest = hex(fnv1a(describe(obj, p)));
  std::span<const double> vstar;
  if (obj.minimizer) vstar = *obj.minimizer;

  Ensemble ens = std::move(initial);
  ens.set_time(0.0);
  try {
    for (std::size_t k = 0;; ++k) {
      const auto e = energies(ens, obj);
      const Vec c = consensus_point(ens, e, p.alpha);
      if (k % plan.every == 0 || k == p.steps) {
        result.series.records.push_back(make_record(ens, vstar, c, plan.ball_radii));
        if (plan.observer) plan.observer(ens, result.series.records.back());
      }
      if (k == p.steps) break;
      ens = advance(ens, &e, obj, p, k, c, {});
    }
  } catch (const Error& err) {
    result.failure = err;
  }

  if (!result.failure && obj.minimizer) {
    const Vec m = ens.mean();
    double s = 0.0;
    for (std::size_t k = 0; k < m.size(); ++k) s += (m[k] - vstar[k]) * (m[k] - vstar[k]);
    result.series.endpoint_error = s;
  }
  result.final_ensemble = std::move(ens);
  return result;
}

SimulationResult simulate(const InitDistribution& dist, const ObjectiveSpec& obj, const CboParams& p,
                          const RecordingPlan& plan) {
  p.validate();
  Ensemble initial = sample_initial(dist, p.n_particles, p.dim, p.seed);
  SimulationResult result = simulate_from(std::move(initial), obj, p, plan);
  result.series.config_digest = config_digest(dist, obj, p);
  return result;
}

std::string config_digest(const InitDistribution& dist, const ObjectiveSpec& obj, const CboParams& p) {
  std::string s = describe(obj, p);
  if (const auto* g = std::get_if<GaussianIsotropic>(&dist)) {
    s += "|gauss:";
    for (double x : g->mean) s += fmt_double(x) + ",";
    s += fmt_double(g->variance);
  } else {
    const auto& box = std::get<UniformBox>(dist);
    s += "|box:";
    for (double x : box.lo) s += fmt_double(x) + ",";
    s += ":";
    for (double x : box.hi) s += fmt_double(x) + ",";
  }
  return hex(fnv1a(s));
}

}  // namespace cbo
