#include "presets.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "cbo/engine.hpp"
#include "cbo/parallel.hpp"

namespace cbo::cli {

namespace {

CboParams fig_variance_params(const FigVarianceOptions& o, std::size_t n) {
  CboParams p;
  p.lambda = 1.0;
  p.sigma = 0.5;
  p.alpha = 1e15;
  p.dt = 0.01;
  p.steps = o.steps;
  p.n_particles = n;
  p.dim = 1;
  p.seed = o.seed;
  return p;
}

FigVarianceRun fig_variance_run(double mu, const FigVarianceOptions& o, const CboParams& p) {
  const ObjectiveSpec obj = rastrigin(1);
  const Vec& vstar = *obj.minimizer;
  FigVarianceRun run;
  run.mu = mu;

  std::vector<std::pair<double, double>> mollified;  // (t, empirical phi mass)
  RecordingPlan plan;
  plan.ball_radii = {o.mass_radius};
  plan.observer = [&](const Ensemble& ens, const MetricsRecord& rec) {
    mollified.emplace_back(rec.t, theory::mollified_mass(ens, vstar, o.mass_radius));
  };
  SimulationResult sim = simulate(GaussianIsotropic{{mu}, 0.8}, obj, p, plan);
  run.series = std::move(sim.series);
  run.failure = std::move(sim.failure);

  const auto& recs = run.series.records;
  if (recs.size() >= 2) {
    run.window = default_fit_window(run.series);
    run.rate = fit_v_decay_rate(run.series);
  }
  for (const auto& r : recs) {
    if (r.t > 0.0 && r.t <= o.early_window + 1e-12 && r.variance > recs.front().variance) run.variance_increase = true;
    run.b_bound = std::max(run.b_bound, r.consensus_dist);
  }

  const double n = static_cast<double>(p.n_particles);
  run.q = theory::decay_rate_q(p.lambda, p.sigma, p.dim, theory::find_c(p.dim), o.mass_radius, run.b_bound);
  const double mass0 = mollified.empty() ? 0.0 : mollified.front().second;
  for (const auto& [t, emp] : mollified) {
    MassBoundPoint pt;
    pt.t = t;
    pt.empirical = emp;
    pt.bound = theory::mass_lower_bound(mass0, run.q, t);
    pt.std_error = std::sqrt(pt.bound * (1.0 - pt.bound) / n);
    pt.ok = pt.empirical >= pt.bound - 3.0 * pt.std_error;
    run.mass_ok = run.mass_ok && pt.ok;
    run.mass_audit.push_back(pt);
  }
  return run;
}

std::string fmt(double x) { return format_double(x); }

}  // namespace

FigVarianceResult run_fig_variance(const FigVarianceOptions& options) {
  if (!(options.scale > 0.0 && options.scale <= 1.0)) {
    throw Error(ErrorKind::kInvalidConfig, "fig-variance scale must lie in (0, 1]");
  }
  FigVarianceResult result;
  result.n_particles = static_cast<std::size_t>(std::llround(320000.0 * options.scale));
  if (result.n_particles == 0) throw Error(ErrorKind::kInvalidConfig, "fig-variance scale yields zero particles");
  const CboParams p = fig_variance_params(options, result.n_particles);
  result.theoretical_rate = 2.0 * p.lambda - static_cast<double>(p.dim) * p.sigma * p.sigma;
  result.runs.resize(options.mus.size());
  parallel_for(options.mus.size(), [&](std::size_t k) { result.runs[k] = fig_variance_run(options.mus[k], options, p); });
  return result;
}

void write_fig_variance(const FigVarianceResult& result, const FigVarianceOptions& options, const std::string& dir) {
  const CboParams p = fig_variance_params(options, result.n_particles);
  KeyValues top{{"preset", "fig-variance"},
                {"n_particles", std::to_string(result.n_particles)},
                {"theoretical_rate", fmt(result.theoretical_rate)}};
  bool failed = false;
  for (std::size_t k = 0; k < result.runs.size(); ++k) {
    const auto& run = result.runs[k];
    const std::string sub = dir + "/mu_" + std::to_string(k + 1);
    std::ostringstream csv;
    write_metrics_csv(csv, run.series, {options.mass_radius});
    write_file(sub + "/metrics.csv", csv.str());

    std::ostringstream mass;
    mass << "t,empirical,bound,std_error,ok\n";
    for (const auto& pt : run.mass_audit) {
      mass << fmt(pt.t) << ',' << fmt(pt.empirical) << ',' << fmt(pt.bound) << ',' << fmt(pt.std_error) << ','
           << (pt.ok ? 1 : 0) << '\n';
    }
    write_file(sub + "/mass_bound.csv", mass.str());

    const std::string digest = config_digest(GaussianIsotropic{{run.mu}, 0.8}, rastrigin(1), p);
    KeyValues kv{{"mu", fmt(run.mu)},
                 {"config_digest", digest},
                 {"decay_rate", fmt(run.rate)},
                 {"theoretical_rate", fmt(result.theoretical_rate)},
                 {"window", fmt(run.window.begin) + "," + fmt(run.window.end)},
                 {"endpoint_error", run.series.endpoint_error ? fmt(*run.series.endpoint_error) : "nan"},
                 {"variance_increase", run.variance_increase ? "true" : "false"},
                 {"mass_bound_q", fmt(run.q)},
                 {"mass_bound_ok", run.mass_ok ? "true" : "false"},
                 {"status", run.failure ? std::string("failed: ") + run.failure->what() : "ok"}};
    std::ostringstream s;
    write_key_values(s, kv);
    write_file(sub + "/summary.txt", s.str());

    const std::string key = "mu_" + std::to_string(k + 1);
    top.emplace_back(key + ".mu", fmt(run.mu));
    top.emplace_back(key + ".decay_rate", fmt(run.rate));
    top.emplace_back(key + ".variance_increase", run.variance_increase ? "true" : "false");
    top.emplace_back(key + ".mass_bound_ok", run.mass_ok ? "true" : "false");
    failed = failed || run.failure.has_value();
  }
  top.emplace_back("status", failed ? "failed" : "ok");
  std::ostringstream s;
  write_key_values(s, top);
  write_file(dir + "/summary.txt", s.str());
}

FigTrajectoriesResult run_fig_trajectories(const FigTrajectoriesOptions& options) {
  if (options.runs < 2) throw Error(ErrorKind::kInvalidConfig, "fig-trajectories needs at least 2 runs");
  if (options.n_particles == 0) throw Error(ErrorKind::kInvalidConfig, "fig-trajectories needs particles");
  const ObjectiveSpec obj = rastrigin(2);
  CboParams p;
  p.lambda = 1.0;
  p.sigma = options.sigma;
  p.alpha = 1e15;
  p.dt = 0.01;
  p.steps = options.steps;
  p.n_particles = options.n_particles + kTrackedAgents.size();
  p.dim = 2;

  FigTrajectoriesResult result;
  result.n_particles = p.n_particles;
  result.dt = p.dt;
  result.paths.resize(options.runs);
  const auto seeds = mfa::replication_seeds(options.seed, options.runs);
  parallel_for(options.runs, [&](std::size_t run) {
    CboParams rp = p;
    rp.seed = seeds[run];
    Ensemble sampled = sample_initial(GaussianIsotropic{{8.0, 8.0}, 20.0}, options.n_particles, 2, rp.seed);
    std::vector<Vec> rows;
    rows.reserve(rp.n_particles);
    for (std::size_t i = 0; i < sampled.size(); ++i) rows.emplace_back(sampled[i].begin(), sampled[i].end());
    for (const auto& a : kTrackedAgents) rows.push_back({a[0], a[1]});

    auto& paths = result.paths[run];
    paths.assign(kTrackedAgents.size(), {});
    RecordingPlan plan;
    plan.observer = [&](const Ensemble& ens, const MetricsRecord&) {
      for (std::size_t a = 0; a < kTrackedAgents.size(); ++a) {
        const auto v = ens[options.n_particles + a];
        paths[a].push_back({v[0], v[1]});
      }
    };
    SimulationResult sim = simulate_from(Ensemble(std::move(rows)), obj, rp, plan);
    if (sim.failure) throw *sim.failure;
  });

  const std::size_t points = options.steps + 1;
  result.mean_paths.assign(kTrackedAgents.size(), std::vector<Point2>(points, Point2{0.0, 0.0}));
  for (const auto& run : result.paths) {
    for (std::size_t a = 0; a < kTrackedAgents.size(); ++a) {
      for (std::size_t k = 0; k < points; ++k) {
        result.mean_paths[a][k][0] += run[a][k][0] / static_cast<double>(options.runs);
        result.mean_paths[a][k][1] += run[a][k][1] / static_cast<double>(options.runs);
      }
    }
  }

  for (std::size_t a = 0; a < kTrackedAgents.size(); ++a) {
    AgentSummary s;
    s.start = kTrackedAgents[a];
    const double chord = std::hypot(s.start[0], s.start[1]);
    for (const auto& pt : result.mean_paths[a]) {
      // distance from pt to the segment start -> origin
      const double u = std::clamp((pt[0] * s.start[0] + pt[1] * s.start[1]) / (chord * chord), 0.0, 1.0);
      const double dev = std::hypot(pt[0] - u * s.start[0], pt[1] - u * s.start[1]);
      s.max_deviation_ratio = std::max(s.max_deviation_ratio, dev / chord);
    }
    const auto& end = result.mean_paths[a].back();
    s.end_distance = std::hypot(end[0], end[1]);
    result.agents.push_back(s);
  }
  return result;
}

void write_fig_trajectories(const FigTrajectoriesResult& result, const std::string& dir) {
  std::ostringstream traj;
  traj << "run,agent,t,x,y\n";
  for (std::size_t run = 0; run < result.paths.size(); ++run) {
    for (std::size_t a = 0; a < result.paths[run].size(); ++a) {
      const auto& path = result.paths[run][a];
      for (std::size_t k = 0; k < path.size(); ++k) {
        traj << run << ',' << a << ',' << fmt(static_cast<double>(k) * result.dt) << ',' << fmt(path[k][0]) << ','
             << fmt(path[k][1]) << '\n';
      }
    }
  }
  write_file(dir + "/trajectories.csv", traj.str());

  std::ostringstream mean;
  mean << "agent,t,x,y\n";
  for (std::size_t a = 0; a < result.mean_paths.size(); ++a) {
    for (std::size_t k = 0; k < result.mean_paths[a].size(); ++k) {
      mean << a << ',' << fmt(static_cast<double>(k) * result.dt) << ',' << fmt(result.mean_paths[a][k][0]) << ','
           << fmt(result.mean_paths[a][k][1]) << '\n';
    }
  }
  write_file(dir + "/mean_trajectories.csv", mean.str());

  KeyValues kv{{"preset", "fig-trajectories"},
               {"n_particles", std::to_string(result.n_particles)},
               {"runs", std::to_string(result.paths.size())}};
  for (std::size_t a = 0; a < result.agents.size(); ++a) {
    const auto& s = result.agents[a];
    const std::string key = "agent_" + std::to_string(a);
    kv.emplace_back(key + ".start", fmt(s.start[0]) + "," + fmt(s.start[1]));
    kv.emplace_back(key + ".max_deviation_ratio", fmt(s.max_deviation_ratio));
    kv.emplace_back(key + ".end_distance", fmt(s.end_distance));
  }
  std::ostringstream s;
  write_key_values(s, kv);
  write_file(dir + "/summary.txt", s.str());
}

void write_mfa_sweep(const mfa::SweepResult& result, const std::string& dir) {
  std::ostringstream csv;
  csv << "N,err_sup,err_sup_conditional,exceed_fraction,seeds\n";
  for (const auto& run : result.runs) {
    csv << run.n << ',' << fmt(run.err_sup) << ',' << fmt(run.err_sup_conditional) << ',' << fmt(run.exceed_fraction)
        << ',' << run.seeds.size() << '\n';
  }
  write_file(dir + "/mfa_sweep.csv", csv.str());

  KeyValues kv{{"preset", "mfa-sweep"},
               {"slope", fmt(result.slope)},
               {"m_threshold", fmt(result.m_threshold)},
               {"n_ref", result.runs.empty() ? "0" : std::to_string(result.runs.front().n_ref)}};
  std::ostringstream s;
  write_key_values(s, kv);
  write_file(dir + "/summary.txt", s.str());
}

KeyValues laplace_audit_summary(const theory::LaplaceAuditResult& r) {
  return {{"preset", "laplace-audit"},
          {"measures", std::to_string(r.measures)},
          {"violations", std::to_string(r.violations)},
          {"max_ratio", fmt(r.max_ratio)},
          {"mean_ratio", fmt(r.mean_ratio)},
          {"mean_bound", fmt(r.mean_bound)},
          {"alpha_monotone", r.alpha_monotone ? "true" : "false"}};
}

}  // namespace cbo::cli
