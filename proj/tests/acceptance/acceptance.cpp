// Acceptance suite: one PASS/FAIL line per criterion, nonzero exit if any fails.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "cbo/engine.hpp"
#include "cbo/metrics.hpp"
#include "cbo/mfa.hpp"
#include "cbo/theory.hpp"
#include "cli/csv.hpp"
#include "cli/presets.hpp"
#include "mollifier_oracle.hpp"

namespace {

using namespace cbo;

struct Outcome {
  bool pass = false;
  std::string detail;
};

std::string num(double x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.6g", x);
  return buf;
}

// Criteria 1 and 8 share the mu = 1 run.
const cli::FigVarianceResult& fig_variance() {
  static const cli::FigVarianceResult result = [] {
    cli::FigVarianceOptions o;  // N = 20000, 800 steps, seed 7
    o.mus = {1.0, 4.0};
    return cli::run_fig_variance(o);
  }();
  return result;
}

Outcome criterion1() {
  const auto& r = fig_variance();
  const auto& mu1 = r.runs[0];
  const auto& mu4 = r.runs[1];
  const double target = r.theoretical_rate;
  const bool rate_ok = !mu1.failure && std::abs(mu1.rate - target) <= 0.15 * target;
  const bool var_ok = !mu4.failure && mu4.variance_increase;
  return {rate_ok && var_ok, "N=" + std::to_string(r.n_particles) + " mu=1 rate=" + num(mu1.rate) + " (target " +
                                 num(target) + " +-15%, window [" + num(mu1.window.begin) + "," +
                                 num(mu1.window.end) + "]); mu=4 variance increase by t<=0.5: " +
                                 (mu4.variance_increase ? "yes" : "no")};
}

Outcome criterion2() {
  cli::FigTrajectoriesOptions o;  // N = 4000, 100 runs, sigma = 0.1, 800 steps
  const auto r = cli::run_fig_trajectories(o);
  bool ok = true;
  std::string detail;
  for (const auto& a : r.agents) {
    ok = ok && a.max_deviation_ratio <= 0.15 && a.end_distance <= 0.5;
    detail += "(" + num(a.start[0]) + "," + num(a.start[1]) + "): dev=" + num(a.max_deviation_ratio) +
              " end=" + num(a.end_distance) + "; ";
  }
  return {ok, detail + "limits dev<=0.15 end<=0.5"};
}

Outcome criterion3() {
  mfa::SweepConfig cfg;  // N in {50..800}, n_ref = 1e4, 32 seeds, rho_0 = N(2, 1)
  cfg.params.lambda = 1.0;
  cfg.params.sigma = 0.5;
  cfg.params.alpha = 10.0;
  cfg.params.dt = 0.01;
  cfg.params.steps = 200;
  cfg.params.dim = 1;
  cfg.params.seed = 1;
  const auto r = mfa::mfa_sweep(cfg, quadratic(1, {0.0}));
  std::string detail = "err_sup:";
  for (const auto& run : r.runs) detail += " N=" + std::to_string(run.n) + ":" + num(run.err_sup);
  return {r.slope >= -1.4 && r.slope <= -0.6, detail + "; slope=" + num(r.slope) + " (target [-1.4,-0.6])"};
}

Outcome criterion4() {
  const auto r = theory::laplace_audit(theory::LaplaceAuditConfig{});
  return {r.measures == 1000 && r.violations == 0,
          std::to_string(r.measures) + " measures, " + std::to_string(r.violations) +
              " violations, max |v_alpha-v*|/bound=" + num(r.max_ratio)};
}

Outcome criterion5() {
  bool ok = true;
  std::string detail;
  for (std::size_t d : {1u, 2u, 5u}) {
    const auto c = test::check_mollifier_derivatives(d, 100, 500 + d);
    ok = ok && c.max_grad_rel <= 1e-5 && c.max_lap_rel <= 1e-5;
    detail += "d=" + std::to_string(d) + " grad " + num(c.max_grad_rel) + " lap " + num(c.max_lap_rel) + "; ";
  }
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> u(-3.0, 3.0);
  bool center_ok = true, support_ok = true;
  for (int rep = 0; rep < 1000; ++rep) {
    const std::size_t d = 1 + rep % 5;
    Vec vstar(d), v(d);
    double s = 0.0;
    for (std::size_t k = 0; k < d; ++k) {
      vstar[k] = u(rng);
      v[k] = vstar[k] + u(rng);
      s += (v[k] - vstar[k]) * (v[k] - vstar[k]);
    }
    const double r = 0.5 + (rep % 7) * 0.5;
    center_ok = center_ok && theory::mollifier(vstar, vstar, r) == 1.0;
    const double phi = theory::mollifier(v, vstar, r);
    support_ok = support_ok && ((s < r * r) ? phi > 0.0 : (phi == 0.0 && theory::mollifier_laplacian(v, vstar, r) == 0.0));
  }
  ok = ok && center_ok && support_ok;
  return {ok, detail + "phi(v*)=1: " + (center_ok ? "yes" : "no") + ", support exact: " + (support_ok ? "yes" : "no")};
}

Outcome criterion6() {
  const double c = theory::find_c(1);
  const double ts = theory::t_star(1.0, std::exp(-1.75), 0.0, 1.0, 0.5, 1);
  const auto b = theory::b_constants(1.0, 1.0, 1.0, 1.0);
  const double q = theory::decay_rate_q(0.0, 1.0, 1, 0.75, 1.0, 0.0);
  const bool ok = std::abs(c - (std::sqrt(5.0) - 1.0) / 2.0) <= 1e-12 && std::abs(ts - 1.0) <= 1e-12 &&
                  b.first == 5.0 && b.second == 4.0 && q == 960.0;
  return {ok, "find_c(1)=" + cli::format_double(c) + " t_star=" + cli::format_double(ts) + " b=(" +
                  cli::format_double(b.first) + "," + cli::format_double(b.second) + ") q=" + cli::format_double(q)};
}

Outcome criterion7() {
  constexpr int kCases = 1000;
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> u(-4.0, 4.0), log_alpha(-2.0, 15.0), off(-50.0, 50.0);
  int hull = 0, offset = 0, var_le_v = 0, identity = 0, w2 = 0, determinism = 0;
  for (int rep = 0; rep < kCases; ++rep) {
    const std::size_t d = 1 + rep % 3;
    const std::size_t n = 1 + rep % 40;
    Ensemble ens(n, d);
    for (auto& x : ens.data()) x = u(rng);
    const auto obj = rastrigin(d);
    Vec vstar(d);
    for (auto& x : vstar) x = u(rng);

    const Vec c = consensus_point(ens, obj, std::pow(10.0, log_alpha(rng)));
    bool inside = true;
    for (std::size_t k = 0; k < d; ++k) {
      double lo = ens[0][k], hi = ens[0][k];
      for (std::size_t i = 1; i < n; ++i) {
        lo = std::min(lo, ens[i][k]);
        hi = std::max(hi, ens[i][k]);
      }
      inside = inside && c[k] >= lo && c[k] <= hi;
    }
    hull += inside;

    const double alpha = 0.01 + 50.0 * (rep % 10) / 10.0;
    const Vec a = consensus_point(ens, obj, alpha);
    const Vec b = consensus_point(ens, with_offset(obj, off(rng)), alpha);
    bool same = true;
    for (std::size_t k = 0; k < d; ++k) same = same && std::abs(a[k] - b[k]) <= 1e-12 * std::max(1.0, std::abs(a[k]));
    offset += same;

    const double v = v_functional(ens, vstar);
    const double var = variance(ens);
    const Vec m = ens.mean();
    double gap = 0.0;
    for (std::size_t k = 0; k < d; ++k) gap += (m[k] - vstar[k]) * (m[k] - vstar[k]);
    var_le_v += var <= v + 1e-10 * std::max(1.0, v);
    identity += std::abs(var - (v - 0.5 * gap)) <= 1e-10 * std::max(1.0, v);
    w2 += make_record(ens, vstar, c, {}).w2_sq == 2.0 * v;

    CboParams p;
    p.lambda = 1.0;
    p.sigma = 0.3 + 0.1 * (rep % 5);
    p.alpha = alpha;
    p.steps = 5;
    p.n_particles = n;
    p.dim = d;
    p.seed = rng();
    RecordingPlan plan;
    plan.ball_radii = {0.5};
    const GaussianIsotropic dist{vstar, 1.0};
    std::string text[2];
    for (auto& t : text) {
      std::ostringstream s;
      cli::write_metrics_csv(s, simulate(dist, obj, p, plan).series, plan.ball_radii);
      t = s.str();
    }
    determinism += text[0] == text[1];
  }
  const bool ok = hull == kCases && offset == kCases && var_le_v == kCases && identity == kCases && w2 == kCases &&
                  determinism == kCases;
  auto frac = [&](int k) { return std::to_string(k) + "/" + std::to_string(kCases); };
  return {ok, "hull " + frac(hull) + ", offset " + frac(offset) + ", Var<=V " + frac(var_le_v) + ", identity " +
                  frac(identity) + ", w2=2V " + frac(w2) + ", determinism " + frac(determinism)};
}

Outcome criterion8() {
  const auto& run = fig_variance().runs[0];
  double worst = 0.0;  // largest (bound - 3 se) - empirical
  for (const auto& pt : run.mass_audit) worst = std::max(worst, pt.bound - 3.0 * pt.std_error - pt.empirical);
  return {run.mass_ok && !run.mass_audit.empty(),
          std::to_string(run.mass_audit.size()) + " recorded times, q=" + num(run.q) + " B=" + num(run.b_bound) +
              ", worst shortfall " + num(worst)};
}

}  // namespace

int main() {
  const std::vector<std::pair<const char*, std::function<Outcome()>>> criteria{
      {"1 decay rate (fig-variance, scaled)", criterion1},
      {"2 straight mean trajectories", criterion2},
      {"3 mean-field N^-1 rate", criterion3},
      {"4 Laplace bound audit", criterion4},
      {"5 mollifier calculus", criterion5},
      {"6 closed-form constants", criterion6},
      {"7 structural invariants", criterion7},
      {"8 mass lower bound", criterion8},
  };
  int failures = 0;
  for (const auto& [name, fn] : criteria) {
    const auto start = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = fn();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    std::printf("%s criterion %s: %s [%.1fs]\n", o.pass ? "PASS" : "FAIL", name, o.detail.c_str(), secs);
    std::fflush(stdout);
    failures += !o.pass;
  }
  return failures == 0 ? 0 : 1;
}
