#include "app.hpp"

#include <cmath>
#include <filesystem>
#include <ostream>
#include <sstream>

#include <CLI11.hpp>

#include "cbo/engine.hpp"
#include "cbo/error.hpp"
#include "cbo/mfa.hpp"
#include "presets.hpp"

namespace cbo::cli {

namespace {

std::string fmt(double x) { return format_double(x); }
std::string flag(bool b) { return b ? "true" : "false"; }

int exit_code_for(const Error& e) {
  switch (e.kind()) {
    case ErrorKind::kInvalidConfig:
    case ErrorKind::kInvalidDimension:
      return kExitConfig;
    case ErrorKind::kDivergence:
      return kExitDivergence;
    default:
      return e.is_theory_precondition() ? kExitTheory : kExitFailure;
  }
}

void print(std::ostream& out, const KeyValues& kv) { write_key_values(out, kv); }

void save(const std::string& path, const KeyValues& kv) {
  std::ostringstream s;
  write_key_values(s, kv);
  write_file(path, s.str());
}

int report_fig_variance(const FigVarianceOptions& o, const std::string& dir, std::ostream& out) {
  const auto result = run_fig_variance(o);
  write_fig_variance(result, o, dir);
  out << "theoretical_rate=" << fmt(result.theoretical_rate) << '\n';
  for (const auto& run : result.runs) {
    out << "mu=" << fmt(run.mu) << " decay_rate=" << fmt(run.rate) << " variance_increase=" << flag(run.variance_increase)
        << " mass_bound_ok=" << flag(run.mass_ok) << '\n';
  }
  for (const auto& run : result.runs) {
    if (run.failure) return exit_code_for(*run.failure);
  }
  return kExitOk;
}

int report_fig_trajectories(const FigTrajectoriesOptions& o, const std::string& dir, std::ostream& out) {
  const auto result = run_fig_trajectories(o);
  write_fig_trajectories(result, dir);
  for (std::size_t a = 0; a < result.agents.size(); ++a) {
    const auto& s = result.agents[a];
    out << "agent=" << a << " start=" << fmt(s.start[0]) << ',' << fmt(s.start[1])
        << " max_deviation_ratio=" << fmt(s.max_deviation_ratio) << " end_distance=" << fmt(s.end_distance) << '\n';
  }
  return kExitOk;
}

int report_mfa_sweep(const RunConfig& cfg, const std::string& dir, std::ostream& out) {
  const auto result = mfa::mfa_sweep(cfg.mfa, cfg.make_objective());
  write_mfa_sweep(result, dir);
  for (const auto& run : result.runs) {
    out << "N=" << run.n << " err_sup=" << fmt(run.err_sup) << " err_sup_conditional=" << fmt(run.err_sup_conditional)
        << " exceed_fraction=" << fmt(run.exceed_fraction) << '\n';
  }
  out << "slope=" << fmt(result.slope) << '\n';
  return kExitOk;
}

int report_laplace_audit(const RunConfig& cfg, const std::string& dir, std::ostream& out) {
  const auto result = theory::laplace_audit(cfg.audit);
  const auto kv = laplace_audit_summary(result);
  save(dir + "/summary.txt", kv);
  print(out, kv);
  return result.violations == 0 ? kExitOk : kExitFailure;
}

FigVarianceOptions fig_variance_from(const RunConfig& cfg) {
  FigVarianceOptions o;
  o.seed = cfg.params.seed;
  return o;
}

FigTrajectoriesOptions fig_trajectories_from(const RunConfig& cfg) {
  FigTrajectoriesOptions o;
  o.seed = cfg.params.seed;
  return o;
}

std::string theory_flag_hint(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::kEmptyBall: return "no sample inside theory.laplace_r of the minimizer; enlarge it or move init";
    case ErrorKind::kNonContractive: return "requires 2 * params.lambda > dim * params.sigma^2";
    case ErrorKind::kInvalidAccuracy: return "theory.eps must lie in (0, V(rho_0)]";
    case ErrorKind::kUnsupportedInitialization: return "init has no mass near the minimizer at the alpha0 radius";
    default: return "";
  }
}

}  // namespace

KeyValues theory_report_entries(const theory::TheoryReport& r) {
  const auto& w = r.wellprep;
  return {{"dim", std::to_string(r.dim)},
          {"c", fmt(r.c)},
          {"q", r.q_rate ? fmt(*r.q_rate) : "infinite (sigma=0)"},
          {"b_bound", fmt(r.b_bound)},
          {"mollified_mass0", fmt(r.mollified_mass0)},
          {"v0", fmt(r.v0)},
          {"var0", fmt(r.var0)},
          {"t_star", fmt(r.t_star)},
          {"alpha0_c", fmt(r.alpha0_c)},
          {"alpha0", fmt(r.alpha0)},
          {"b1", fmt(r.b1)},
          {"b2", fmt(r.b2)},
          {"laplace_lhs", fmt(r.laplace_lhs)},
          {"laplace_rhs", fmt(r.laplace_rhs)},
          {"laplace_feasible", flag(r.laplace_feasible)},
          {"contractive", flag(r.contractive)},
          {"wellprep_cond1", flag(w.cond1)},
          {"wellprep_margin1", fmt(w.margin1)},
          {"wellprep_cond2", flag(w.cond2)},
          {"wellprep_margin2", fmt(w.margin2)},
          {"wellprep_concentration", flag(w.concentration)},
          {"wellprep_concentration_margin", fmt(w.concentration_margin)},
          {"metadata_is_heuristic", flag(r.metadata_is_heuristic)}};
}

theory::TheoryReport theory_report_for(const RunConfig& cfg) {
  const ObjectiveSpec obj = cfg.make_objective();
  cfg.params.validate();
  const Ensemble initial = sample_initial(cfg.init, cfg.params.n_particles, cfg.params.dim, cfg.params.seed);
  return theory::make_report(obj, cfg.params, cfg.init, initial, cfg.theory);
}

int run_simulation(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
  const ObjectiveSpec obj = cfg.make_objective();
  cfg.params.validate();
  const RecordingPlan plan = cfg.make_plan();
  const SimulationResult sim = simulate(cfg.init, obj, cfg.params, plan);

  std::ostringstream csv;
  write_metrics_csv(csv, sim.series, plan.ball_radii);
  write_file(cfg.outputs + "/metrics.csv", csv.str());

  double rate = std::nan("");
  TimeWindow window{std::nan(""), std::nan("")};
  try {
    if (sim.series.records.size() >= 2) {
      window = default_fit_window(sim.series);
      rate = fit_v_decay_rate(sim.series);
    }
  } catch (const Error&) {
    // no usable fit window (e.g. unknown minimizer); rate stays nan
  }
  const double theoretical = 2.0 * cfg.params.lambda - static_cast<double>(cfg.params.dim) * cfg.params.sigma * cfg.params.sigma;
  KeyValues kv{{"config_digest", sim.series.config_digest},
               {"endpoint_error", sim.series.endpoint_error ? fmt(*sim.series.endpoint_error) : "nan"},
               {"decay_rate", fmt(rate)},
               {"theoretical_rate", fmt(theoretical)},
               {"window", fmt(window.begin) + "," + fmt(window.end)},
               {"records", std::to_string(sim.series.records.size())},
               {"status", sim.failure ? std::string("failed: ") + sim.failure->what() : "ok"}};
  save(cfg.outputs + "/summary.txt", kv);
  print(out, kv);
  if (sim.failure) {
    err << "error: " << sim.failure->what() << '\n';
    // an overflowing energy is how divergence usually surfaces first
    if (sim.failure->kind() == ErrorKind::kNumericDomain) return kExitDivergence;
    return exit_code_for(*sim.failure);
  }
  return kExitOk;
}

int run_app(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Consensus-based optimization experiments", "cbo"};
  app.require_subcommand(1);

  std::string config_path;
  auto* run = app.add_subcommand("run", "Simulate a JSON config and write metrics.csv and summary.txt");
  run->add_option("config", config_path, "Config file")->required();

  auto* theory_cmd = app.add_subcommand("theory", "Print the theory report for a JSON config");
  theory_cmd->add_option("config", config_path, "Config file")->required();

  auto* preset = app.add_subcommand("preset", "Run an experiment preset");
  preset->require_subcommand(1);

  FigVarianceOptions fv;
  std::string fv_out = "out/fig-variance";
  bool fv_full = false;
  auto* fig_var = preset->add_subcommand("fig-variance", "V and Var decay on 1-D Rastrigin for mu in {1,2,3,4}");
  fig_var->add_option("--scale", fv.scale, "Fraction of 320000 particles")->check(CLI::Range(0.0, 1.0));
  fig_var->add_flag("--full", fv_full, "Use all 320000 particles");
  fig_var->add_option("--out", fv_out, "Output directory");
  fig_var->add_option("--seed", fv.seed, "Random seed");
  fig_var->add_option("--steps", fv.steps, "Number of time steps");

  FigTrajectoriesOptions ft;
  std::string ft_out = "out/fig-trajectories";
  bool ft_full = false;
  auto* fig_traj = preset->add_subcommand("fig-trajectories", "Tracked agents on 2-D Rastrigin");
  fig_traj->add_option("--runs", ft.runs, "Independent runs")->check(CLI::PositiveNumber);
  fig_traj->add_flag("--full", ft_full, "Use 32000 sampled agents");
  fig_traj->add_option("--particles", ft.n_particles, "Sampled agents per run")->check(CLI::PositiveNumber);
  fig_traj->add_option("--out", ft_out, "Output directory");
  fig_traj->add_option("--seed", ft.seed, "Random seed");
  fig_traj->add_option("--steps", ft.steps, "Number of time steps");

  std::string preset_out;
  auto* mfa_cmd = preset->add_subcommand("mfa-sweep", "Coupling error against the mean-field surrogate over N");
  mfa_cmd->add_option("config", config_path, "Config file")->required();
  mfa_cmd->add_option("--out", preset_out, "Output directory (default: config outputs)");
  auto* audit_cmd = preset->add_subcommand("laplace-audit", "Randomized audit of the Laplace bound");
  audit_cmd->add_option("config", config_path, "Config file")->required();
  audit_cmd->add_option("--out", preset_out, "Output directory (default: config outputs)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitConfig;
  }

  try {
    if (*run) {
      const RunConfig cfg = load_config(config_path);
      if (!cfg.preset) return run_simulation(cfg, out, err);
      switch (*cfg.preset) {
        case Preset::kFigVariance: return report_fig_variance(fig_variance_from(cfg), cfg.outputs, out);
        case Preset::kFigTrajectories: return report_fig_trajectories(fig_trajectories_from(cfg), cfg.outputs, out);
        case Preset::kMfaSweep: return report_mfa_sweep(cfg, cfg.outputs, out);
        case Preset::kLaplaceAudit: return report_laplace_audit(cfg, cfg.outputs, out);
      }
    }
    if (*theory_cmd) {
      const RunConfig cfg = load_config(config_path);
      try {
        print(out, theory_report_entries(theory_report_for(cfg)));
      } catch (const Error& e) {
        const std::string hint = theory_flag_hint(e.kind());
        err << "error: " << e.what() << (hint.empty() ? "" : " (" + hint + ")") << '\n';
        return exit_code_for(e);
      }
      return kExitOk;
    }
    if (*fig_var) {
      if (fv_full) fv.scale = 1.0;
      return report_fig_variance(fv, fv_out, out);
    }
    if (*fig_traj) {
      if (ft_full) ft.n_particles = 32000;
      return report_fig_trajectories(ft, ft_out, out);
    }
    if (*mfa_cmd) {
      const RunConfig cfg = load_config(config_path);
      return report_mfa_sweep(cfg, preset_out.empty() ? cfg.outputs : preset_out, out);
    }
    if (*audit_cmd) {
      const RunConfig cfg = load_config(config_path);
      return report_laplace_audit(cfg, preset_out.empty() ? cfg.outputs : preset_out, out);
    }
  } catch (const ConfigError& e) {
    err << "config error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return exit_code_for(e);
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitFailure;
  }
  return kExitFailure;
}

}  // namespace cbo::cli
