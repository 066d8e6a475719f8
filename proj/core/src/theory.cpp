#include "cbo/theory.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <random>

#include <boost/math/distributions/chi_squared.hpp>
#include <boost/math/distributions/non_central_chi_squared.hpp>

#include "cbo/error.hpp"
#include "cbo/metrics.hpp"

namespace cbo::theory {

namespace {

double dist_sq(std::span<const double> a, std::span<const double> b) {
  double s = 0.0;
  for (std::size_t k = 0; k < a.size(); ++k) {
    const double d = a[k] - b[k];
    s += d * d;
  }
  return s;
}

void require_same_dim(std::span<const double> v, std::span<const double> vstar) {
  if (v.size() != vstar.size()) throw Error(ErrorKind::kInvalidDimension, "point and v* differ in dimension");
}

void require_radius(double r) {
  if (!(r > 0.0)) throw Error(ErrorKind::kInvalidInput, "radius must be positive");
}

}  // namespace

double find_c(std::size_t d) {
  if (d == 0) throw Error(ErrorKind::kInvalidDimension, "find_c: d must be positive");
  const double dd = static_cast<double>(d);
  return 2.0 * dd / (2.0 * dd - 1.0 + std::sqrt(4.0 * dd + 1.0));
}

double decay_rate_q(double lambda, double sigma, std::size_t d, double c, double r, double b_bound) {
  if (!(c > 0.5 && c < 1.0)) throw Error(ErrorKind::kInvalidInput, "decay_rate_q: c must lie in (1/2, 1)");
  require_radius(r);
  if (!(sigma > 0.0)) {
    throw Error(ErrorKind::kInfiniteRate, "decay_rate_q: sigma = 0 admits no finite decay rate");
  }
  const double dd = static_cast<double>(d);
  const double one_minus_c = 1.0 - c;
  const double omc2 = one_minus_c * one_minus_c;
  const double sqrt_c = std::sqrt(c);
  const double drift = 2.0 * lambda * (sqrt_c * r + b_bound) * sqrt_c / (omc2 * r);
  const double diffusion = 2.0 * sigma * sigma * (c * r * r + b_bound * b_bound) * (2.0 * c + dd) / (omc2 * omc2 * r * r);
  const double second = 4.0 * lambda * lambda / ((2.0 * c - 1.0) * sigma * sigma);
  return std::max(drift + diffusion, second);
}

double mass_lower_bound(double phi_mass0, double q, double t) {
  if (!(phi_mass0 >= 0.0 && phi_mass0 <= 1.0)) throw Error(ErrorKind::kInvalidInput, "mass must lie in [0, 1]");
  return phi_mass0 * std::exp(-q * t);
}

double mollifier(std::span<const double> v, std::span<const double> vstar, double r) {
  require_same_dim(v, vstar);
  require_radius(r);
  const double s = dist_sq(v, vstar);
  const double r2 = r * r;
  if (!(s < r2)) return 0.0;
  return std::exp(1.0 - r2 / (r2 - s));
}

std::vector<double> mollifier_grad(std::span<const double> v, std::span<const double> vstar, double r) {
  const double phi = mollifier(v, vstar, r);
  std::vector<double> g(v.size(), 0.0);
  if (phi == 0.0) return g;
  const double r2 = r * r;
  const double gap = r2 - dist_sq(v, vstar);
  const double factor = -2.0 * r2 * phi / (gap * gap);
  for (std::size_t k = 0; k < v.size(); ++k) g[k] = factor * (v[k] - vstar[k]);
  return g;
}

double mollifier_laplacian(std::span<const double> v, std::span<const double> vstar, double r) {
  const double phi = mollifier(v, vstar, r);
  if (phi == 0.0) return 0.0;
  const double r2 = r * r;
  const double s = dist_sq(v, vstar);
  const double gap = r2 - s;
  const double gap2 = gap * gap;
  const double d = static_cast<double>(v.size());
  return 2.0 * r2 * ((2.0 * (2.0 * s - r2) * s - d * gap2) / (gap2 * gap2)) * phi;
}

double mollified_mass(const Ensemble& ens, std::span<const double> vstar, double r) {
  double s = 0.0;
  for (std::size_t i = 0; i < ens.size(); ++i) s += mollifier(ens[i], vstar, r);
  return s / static_cast<double>(ens.size());
}

double initial_ball_mass(const InitDistribution& dist, std::span<const double> vstar, double r) {
  require_radius(r);
  const std::size_t d = vstar.size();
  validate(dist, d);
  const double dd = static_cast<double>(d);

  if (const auto* g = std::get_if<GaussianIsotropic>(&dist)) {
    // |X - v*|^2 / s^2 is noncentral chi-square with d degrees of freedom.
    const double noncentrality = dist_sq(g->mean, vstar) / g->variance;
    const double x = r * r / g->variance;
    if (noncentrality == 0.0) return boost::math::cdf(boost::math::chi_squared_distribution<double>(dd), x);
    return boost::math::cdf(boost::math::non_central_chi_squared_distribution<double>(dd, noncentrality), x);
  }

  const auto& box = std::get<UniformBox>(dist);
  double box_volume = 1.0;
  bool inside = true;
  double outside_sq = 0.0;
  for (std::size_t k = 0; k < d; ++k) {
    box_volume *= box.hi[k] - box.lo[k];
    if (vstar[k] - r < box.lo[k] || vstar[k] + r > box.hi[k]) inside = false;
    const double gap = std::max({box.lo[k] - vstar[k], 0.0, vstar[k] - box.hi[k]});
    outside_sq += gap * gap;
  }
  if (outside_sq > r * r) return 0.0;
  const double ball_volume = std::pow(std::numbers::pi, dd / 2.0) / std::tgamma(dd / 2.0 + 1.0) * std::pow(r, dd);
  if (inside) return ball_volume / box_volume;

  // Ball straddles the boundary: estimate the overlap fraction of the ball.
  constexpr std::size_t kSamples = 1 << 16;
  std::mt19937_64 rng(0x5eed);
  std::normal_distribution<double> normal;
  std::uniform_real_distribution<double> unit;
  std::vector<double> point(d);
  std::size_t hits = 0;
  for (std::size_t s = 0; s < kSamples; ++s) {
    double norm = 0.0;
    for (double& x : point) {
      x = normal(rng);
      norm += x * x;
    }
    const double radius = r * std::pow(unit(rng), 1.0 / dd) / std::sqrt(norm);
    bool in_box = true;
    for (std::size_t k = 0; k < d; ++k) {
      const double x = vstar[k] + radius * point[k];
      if (x < box.lo[k] || x > box.hi[k]) in_box = false;
    }
    if (in_box) ++hits;
  }
  return ball_volume * static_cast<double>(hits) / static_cast<double>(kSamples) / box_volume;
}

double laplace_bound(double first_moment, double mass_r, double alpha, double q, double e_r, double eta, double nu) {
  if (!(mass_r > 0.0)) throw Error(ErrorKind::kEmptyBall, "laplace_bound: no mass in B_r(v*), bound is vacuous");
  if (mass_r > 1.0) throw Error(ErrorKind::kInvalidInput, "laplace_bound: mass exceeds 1");
  return std::pow(q + e_r, nu) / eta + std::exp(-alpha * q) * first_moment / mass_r;
}

double t_star(double v0, double eps, double tau, double lambda, double sigma, std::size_t d) {
  const double rate = 2.0 * lambda - static_cast<double>(d) * sigma * sigma;
  if (!(rate > 0.0)) throw Error(ErrorKind::kNonContractive, "t_star requires 2 lambda > d sigma^2");
  if (!(eps > 0.0) || eps > v0) throw Error(ErrorKind::kInvalidAccuracy, "t_star requires 0 < eps <= V(rho_0)");
  if (!(tau >= 0.0 && tau < 1.0)) throw Error(ErrorKind::kInvalidInput, "t_star requires tau in [0, 1)");
  return std::log(v0 / eps) / ((1.0 - tau) * rate);
}

double alpha0_estimate(double c, double eta, double eps, double l, const std::function<double(double)>& mass_fn) {
  const double scale = c * eta * eta * eps;
  const double mass = mass_fn(scale / (8.0 * l));
  if (!(mass > 0.0)) {
    throw Error(ErrorKind::kUnsupportedInitialization, "alpha0_estimate: rho_0 puts no mass near v*");
  }
  return -8.0 * std::log(std::sqrt(c) / (2.0 * std::numbers::sqrt2) * mass) / scale;
}

double alpha0_c(double tau, double lambda, double sigma, std::size_t d) {
  const double dd = static_cast<double>(d);
  const double rate = 2.0 * lambda - dd * sigma * sigma;
  if (!(rate > 0.0)) throw Error(ErrorKind::kNonContractive, "alpha0_c requires 2 lambda > d sigma^2");
  double root = tau / 2.0 * rate / (std::numbers::sqrt2 * (lambda + dd * sigma * sigma));
  if (sigma > 0.0) root = std::min(root, std::sqrt(tau * rate / (dd * sigma * sigma)));
  return root * root;
}

WellPreparedness wellprep_check(double alpha, double lambda, double sigma, double e_under,
                                std::span<const double> energies, double var0, std::size_t d) {
  if (energies.empty()) throw Error(ErrorKind::kInvalidInput, "wellprep_check: empty energy sample");
  const double dd = static_cast<double>(d);
  const double s2 = sigma * sigma;
  WellPreparedness w;

  double omega = 0.0;
  double omega_shifted = 0.0;
  for (double e : energies) {
    omega += std::exp(-alpha * e);
    omega_shifted += std::exp(-alpha * (e - e_under));
  }
  omega /= static_cast<double>(energies.size());
  omega_shifted /= static_cast<double>(energies.size());
  w.omega_l1 = omega;

  const double lhs1 = 2.0 * alpha * std::exp(-2.0 * alpha * e_under) * (s2 + 2.0 * lambda);
  w.margin1 = 0.75 - lhs1;
  w.cond1 = lhs1 < 0.75;

  w.margin2 = 2.0 * lambda * omega * omega - var0 - 2.0 * dd * s2 * omega * std::exp(-alpha * e_under);
  w.cond2 = w.margin2 >= 0.0;

  w.concentration_margin = 3.0 / (8.0 * alpha) * omega_shifted * omega_shifted - var0;
  w.concentration = w.concentration_margin >= 0.0;
  return w;
}

double evolution_rhs(double v, double cons_dist, double lambda, double sigma, std::size_t d,
                     const std::optional<HActive>& h_active) {
  if (v < 0.0 || cons_dist < 0.0) throw Error(ErrorKind::kInvalidInput, "evolution_rhs: negative input");
  const double ds2 = static_cast<double>(d) * sigma * sigma;
  const double D = cons_dist;
  double rhs = -(2.0 * lambda - ds2) * v + std::numbers::sqrt2 * (lambda + ds2) * std::sqrt(v) * D + ds2 / 2.0 * D * D;
  if (h_active) {
    const auto& h = *h_active;
    rhs += lambda / (h.eta * h.eta) * std::pow(h.l_e * (1.0 + std::pow(D, h.gamma)) * D, 2.0 * h.nu);
  }
  return rhs;
}

std::pair<double, double> b_constants(double alpha, double c2, double c3, double c4,
                                      const std::optional<Bounded>& bounded) {
  if (bounded) return {0.0, std::exp(alpha * (bounded->e_sup - bounded->e_under))};
  const double b2 = 2.0 * (c2 / c3) * (1.0 + 1.0 / (alpha * c3 * c4 * c4));
  return {c4 * c4 + b2, b2};
}

TheoryReport make_report(const ObjectiveSpec& obj, const CboParams& p, const InitDistribution& dist,
                         const Ensemble& initial, const ReportSettings& settings) {
  if (!obj.minimizer) throw Error(ErrorKind::kInvalidConfig, "theory report needs an objective with known minimizer");
  const std::span<const double> vstar = *obj.minimizer;
  const std::size_t d = obj.dim;

  TheoryReport rep;
  rep.dim = d;
  rep.metadata_is_heuristic = obj.metadata_is_heuristic;
  rep.contractive = p.contractive();
  rep.c = find_c(d);

  const auto e = energies(initial, obj);
  const Vec consensus = consensus_point(initial, e, p.alpha);
  rep.laplace_lhs = std::sqrt(dist_sq(consensus, vstar));
  rep.b_bound = settings.b_bound.value_or(rep.laplace_lhs);
  if (p.sigma > 0.0) rep.q_rate = decay_rate_q(p.lambda, p.sigma, d, rep.c, settings.mass_radius, rep.b_bound);
  rep.mollified_mass0 = mollified_mass(initial, vstar, settings.mass_radius);

  rep.v0 = v_functional(initial, vstar);
  rep.var0 = variance(initial);
  rep.wellprep = wellprep_check(p.alpha, p.lambda, p.sigma, obj.e_under, e, rep.var0, d);

  const auto [b1, b2] = b_constants(p.alpha, obj.c2, obj.c3, obj.c4);
  rep.b1 = b1;
  rep.b2 = b2;

  // Laplace bound on the sampled rho_0, with the sample surrogate for E_r.
  double e_r = 0.0;
  for (std::size_t i = 0; i < initial.size(); ++i) {
    if (dist_sq(initial[i], vstar) <= settings.laplace_r * settings.laplace_r) e_r = std::max(e_r, e[i] - obj.e_under);
  }
  rep.laplace_feasible = settings.laplace_r <= obj.r0 && settings.laplace_q + e_r <= obj.e_inf;
  rep.laplace_rhs = laplace_bound(first_moment(initial, vstar), ball_mass(initial, vstar, settings.laplace_r),
                                  p.alpha, settings.laplace_q, e_r, obj.eta, obj.nu);

  rep.t_star = t_star(rep.v0, settings.eps, settings.tau, p.lambda, p.sigma, d);
  rep.alpha0_c = alpha0_c(settings.tau, p.lambda, p.sigma, d);
  rep.alpha0 = alpha0_estimate(rep.alpha0_c, obj.eta, settings.eps, obj.l_e,
                               [&](double radius) { return initial_ball_mass(dist, vstar, radius); });
  return rep;
}

LaplaceAuditResult laplace_audit(const LaplaceAuditConfig& config) {
  if (config.max_particles < config.min_inside || config.min_inside == 0 || config.max_dim == 0) {
    throw Error(ErrorKind::kInvalidConfig, "laplace audit: need max_particles >= min_inside >= 1 and max_dim >= 1");
  }
  std::mt19937_64 rng(config.seed);
  auto uniform = [&](double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(rng); };
  auto log_uniform = [&](double lo, double hi) { return std::exp(uniform(std::log(lo), std::log(hi))); };
  std::normal_distribution<double> normal;

  LaplaceAuditResult res;
  double ratio_sum = 0.0;
  double bound_sum = 0.0;
  for (std::size_t m = 0; m < config.measures; ++m) {
    const std::size_t d = std::uniform_int_distribution<std::size_t>(1, config.max_dim)(rng);
    const std::size_t n = std::uniform_int_distribution<std::size_t>(config.min_inside, config.max_particles)(rng);
    Vec vstar(d);
    for (double& x : vstar) x = uniform(-2.0, 2.0);
    const ObjectiveSpec obj = quadratic(d, vstar);

    // Two-component mixture: a cluster at v* and a displaced cluster.
    const double near_fraction = uniform(0.1, 0.9);
    const double near_scale = log_uniform(1e-3, 0.5);
    const double far_scale = uniform(0.1, 3.0);
    Vec far_center(d);
    for (std::size_t k = 0; k < d; ++k) far_center[k] = vstar[k] + uniform(-5.0, 5.0);
    Ensemble ens(n, d);
    for (std::size_t i = 0; i < n; ++i) {
      const bool near = uniform(0.0, 1.0) < near_fraction;
      for (std::size_t k = 0; k < d; ++k) {
        ens[i][k] = near ? vstar[k] + near_scale * normal(rng) : far_center[k] + far_scale * normal(rng);
      }
    }

    const auto e = energies(ens, obj);
    std::vector<double> dists(n);
    for (std::size_t i = 0; i < n; ++i) dists[i] = std::sqrt(dist_sq(ens[i], vstar));
    std::vector<double> sorted = dists;
    std::sort(sorted.begin(), sorted.end());
    const std::size_t k_inside = std::uniform_int_distribution<std::size_t>(config.min_inside, n)(rng);
    const double r = std::max(sorted[k_inside - 1], 1e-12);

    double e_r = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      if (dists[i] <= r) e_r = std::max(e_r, e[i]);
    }
    const double mass_r = ball_mass(ens, vstar, r);
    const double moment = first_moment(ens, vstar);
    const double q = log_uniform(1e-4, 1.0);
    const double alpha = log_uniform(1e-1, 1e4);

    const Vec consensus = consensus_point(ens, e, alpha);
    const double lhs = std::sqrt(dist_sq(consensus, vstar));
    const double bound = laplace_bound(moment, mass_r, alpha, q, e_r, obj.eta, obj.nu);
    if (lhs > bound * (1.0 + 1e-12)) ++res.violations;
    ratio_sum += lhs / bound;
    bound_sum += bound;
    res.max_ratio = std::max(res.max_ratio, lhs / bound);

    double previous = std::numeric_limits<double>::infinity();
    for (double a = 1e-2; a <= 1e6; a *= 10.0) {
      const double b = laplace_bound(moment, mass_r, a, q, e_r, obj.eta, obj.nu);
      if (b > previous) res.alpha_monotone = false;
      previous = b;
    }
    ++res.measures;
  }
  if (res.measures > 0) {
    res.mean_ratio = ratio_sum / static_cast<double>(res.measures);
    res.mean_bound = bound_sum / static_cast<double>(res.measures);
  }
  return res;
}

}  // namespace cbo::theory
