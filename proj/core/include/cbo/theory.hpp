#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "cbo/engine.hpp"
#include "cbo/ensemble.hpp"
#include "cbo/objectives.hpp"

namespace cbo::theory {

/// Smallest c in (1/2, 1) with (2c - 1) c >= d (1 - c)^2.
///
/// The boundary is the root of (2 - d) c^2 + (2d - 1) c - d = 0 in (1/2, 1). Its
/// discriminant simplifies to 4d + 1, and the root written as 2d / (2d - 1 + sqrt(4d + 1))
/// is free of cancellation and of the a = 0 degeneracy at d = 2.
double find_c(std::size_t d);

/// Exponential rate at which the mollified mass around v* can decay at most:
///
///   q = max{ 2 lambda (sqrt(c) r + B) sqrt(c) / ((1-c)^2 r)
///            + 2 sigma^2 (c r^2 + B^2)(2c + d) / ((1-c)^4 r^2),
///            4 lambda^2 / ((2c - 1) sigma^2) }
///
/// with B a bound on the consensus distance to v*. sigma = 0 has no finite rate
/// and raises kInfiniteRate.
double decay_rate_q(double lambda, double sigma, std::size_t d, double c, double r, double b_bound);

/// phi_mass0 * exp(-q t).
double mass_lower_bound(double phi_mass0, double q, double t);

/// Smooth bump exp(1 - r^2 / (r^2 - |v - v*|^2)) on the open ball, 0 elsewhere.
double mollifier(std::span<const double> v, std::span<const double> vstar, double r);
std::vector<double> mollifier_grad(std::span<const double> v, std::span<const double> vstar, double r);
double mollifier_laplacian(std::span<const double> v, std::span<const double> vstar, double r);

/// Integral of the mollifier against the empirical measure of `ens`.
double mollified_mass(const Ensemble& ens, std::span<const double> vstar, double r);

/// rho_0(B_r(v*)) for an initial law: noncentral chi-square CDF for the Gaussian,
/// volume ratio for the box (Monte Carlo only when the ball straddles the boundary).
double initial_ball_mass(const InitDistribution& dist, std::span<const double> vstar, double r);

/// Quantitative Laplace bound on |v_alpha - v*|:
///   (q + e_r)^nu / eta + exp(-alpha q) first_moment / mass_r.
/// mass_r = 0 makes the bound vacuous and raises kEmptyBall.
double laplace_bound(double first_moment, double mass_r, double alpha, double q, double e_r, double eta, double nu);

/// Time horizon log(v0 / eps) / ((1 - tau)(2 lambda - d sigma^2)).
double t_star(double v0, double eps, double tau, double lambda, double sigma, std::size_t d);

/// Heuristic lower bound for the admissible alpha, assuming the ball mass around v*
/// is smallest at t = 0:
///   alpha0 = -8 log( sqrt(c)/(2 sqrt 2) * mass(c eta^2 eps / (8 L)) ) / (c eta^2 eps).
double alpha0_estimate(double c, double eta, double eps, double l, const std::function<double(double)>& mass_fn);

/// The constant c entering alpha0_estimate:
///   sqrt(c) = min{ (tau/2)(2 lambda - d sigma^2) / (sqrt 2 (lambda + d sigma^2)),
///                  sqrt(tau (2 lambda - d sigma^2) / (d sigma^2)) }.
double alpha0_c(double tau, double lambda, double sigma, std::size_t d);

/// Diagnostics for the classical well-preparedness conditions on rho_0.
/// Every margin is positive exactly when its condition holds.
struct WellPreparedness {
  bool cond1 = false;  // 2 alpha e^{-2 alpha E_} (sigma^2 + 2 lambda) < 3/4
  double margin1 = 0.0;
  bool cond2 = false;  // 2 lambda |w|^2 - Var0 - 2 d sigma^2 |w| e^{-alpha E_} >= 0
  double margin2 = 0.0;
  bool concentration = false;  // Var0 <= 3/(8 alpha) (int exp(-alpha (E - E_)))^2
  double concentration_margin = 0.0;
  double omega_l1 = 0.0;  // Monte-Carlo mean of exp(-alpha E) over the sample
};

WellPreparedness wellprep_check(double alpha, double lambda, double sigma, double e_under,
                                std::span<const double> energies, double var0, std::size_t d);

/// Extra term when the cutoff H is active.
struct HActive {
  double eta = 1.0;
  double nu = 0.5;
  double l_e = 1.0;
  double gamma = 0.0;
};

/// Right-hand side of the differential inequality for V:
///   -(2 lambda - d sigma^2) v + sqrt 2 (lambda + d sigma^2) sqrt(v) D + (d sigma^2 / 2) D^2
/// plus (lambda / eta^2)(L_E (1 + D^gamma) D)^{2 nu} when H is active.
double evolution_rhs(double v, double cons_dist, double lambda, double sigma, std::size_t d,
                     const std::optional<HActive>& h_active = std::nullopt);

struct Bounded {
  double e_sup = 0.0;
  double e_under = 0.0;
};

/// (b1, b2) with |v_alpha|^2 <= b1 + b2 int |v|^2.
std::pair<double, double> b_constants(double alpha, double c2, double c3, double c4,
                                      const std::optional<Bounded>& bounded = std::nullopt);

/// Knobs for a theory report that are not part of the objective or the dynamics.
struct ReportSettings {
  double eps = 1e-2;
  double tau = 0.1;
  double mass_radius = 0.1;  // r used for q and the mollified initial mass
  std::optional<double> b_bound;  // B; defaults to |v_alpha(rho_0) - v*|
  double laplace_q = 0.1;
  double laplace_r = 0.1;
};

/// Closed-form quantities evaluated for one configuration. Moments, energies and
/// the Laplace inputs come from a sampled ensemble of rho_0; the ball mass in the
/// alpha0 heuristic comes from the law itself since its radius is far below the
/// sampling resolution.
struct TheoryReport {
  std::size_t dim = 0;
  double c = 0.0;
  std::optional<double> q_rate;  // empty when sigma = 0
  double b_bound = 0.0;
  double mollified_mass0 = 0.0;
  double v0 = 0.0;
  double var0 = 0.0;
  double t_star = 0.0;
  double alpha0_c = 0.0;
  double alpha0 = 0.0;
  double b1 = 0.0;
  double b2 = 0.0;
  double laplace_rhs = 0.0;
  double laplace_lhs = 0.0;  // |v_alpha(rho_0) - v*|
  bool laplace_feasible = true;  // q + E_r <= E_inf and r <= R_0
  bool contractive = false;
  WellPreparedness wellprep;
  bool metadata_is_heuristic = false;
};

/// Throws the theory-precondition kinds (kNonContractive, kInvalidAccuracy,
/// kUnsupportedInitialization, kEmptyBall) when a formula is not applicable.
TheoryReport make_report(const ObjectiveSpec& obj, const CboParams& p, const InitDistribution& dist,
                         const Ensemble& initial, const ReportSettings& settings);

struct LaplaceAuditConfig {
  std::size_t measures = 1000;
  std::size_t max_particles = 500;
  std::size_t max_dim = 3;
  std::size_t min_inside = 30;
  std::uint64_t seed = 20210101;
};

struct LaplaceAuditResult {
  std::size_t measures = 0;
  std::size_t violations = 0;
  double max_ratio = 0.0;   // max of |v_alpha - v*| / bound
  double mean_ratio = 0.0;
  double mean_bound = 0.0;
  bool alpha_monotone = true;  // bound nonincreasing along an alpha sweep for every measure
};

/// Checks |v_alpha(rho) - v*| <= laplace_bound on random empirical measures for the
/// quadratic objective. E_r is the largest energy among sample points in B_r(v*),
/// and r is chosen so that at least `min_inside` points lie in the ball.
LaplaceAuditResult laplace_audit(const LaplaceAuditConfig& config);

}  // namespace cbo::theory
