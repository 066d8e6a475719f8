#include "config.hpp"

#include <algorithm>
#include <fstream>
#include <initializer_list>
#include <sstream>

#include <json.hpp>

namespace cbo::cli {

using nlohmann::json;

ConfigError::ConfigError(std::size_t line, const std::string& message)
    : std::runtime_error(line > 0 ? "line " + std::to_string(line) + ": " + message : message), line_(line) {}

const char* preset_name(Preset p) {
  switch (p) {
    case Preset::kFigVariance: return "fig-variance";
    case Preset::kFigTrajectories: return "fig-trajectories";
    case Preset::kMfaSweep: return "mfa-sweep";
    case Preset::kLaplaceAudit: return "laplace-audit";
  }
  return "unknown";
}

namespace {

using Path = std::vector<std::string>;

std::string join(const Path& path) {
  std::string s;
  for (const auto& p : path) s += (s.empty() ? "" : ".") + p;
  return s;
}

/// Maps JSON key paths back to source lines by scanning for the quoted keys in order.
class Reader {
 public:
  explicit Reader(const std::string& text) : text_(text) {}

  std::size_t line_of(const Path& path) const {
    std::size_t pos = 0;
    for (const auto& key : path) {
      const std::size_t found = text_.find("\"" + key + "\"", pos);
      if (found == std::string::npos) break;
      pos = found;
    }
    return 1 + static_cast<std::size_t>(std::count(text_.begin(), text_.begin() + static_cast<long>(pos), '\n'));
  }

  [[noreturn]] void fail(const Path& path, const std::string& message) const {
    throw ConfigError(line_of(path), (path.empty() ? "" : join(path) + ": ") + message);
  }

  void expect_object(const json& j, const Path& path) const {
    if (!j.is_object()) fail(path, "expected an object");
  }

  void expect_keys(const json& j, const Path& path, std::initializer_list<const char*> allowed) const {
    expect_object(j, path);
    for (const auto& [key, value] : j.items()) {
      if (std::find_if(allowed.begin(), allowed.end(), [&](const char* a) { return key == a; }) == allowed.end()) {
        Path sub = path;
        sub.push_back(key);
        fail(sub, "unknown key");
      }
    }
  }

  double number(const json& j, const Path& path) const {
    if (!j.is_number()) fail(path, "expected a number");
    return j.get<double>();
  }

  std::uint64_t unsigned_int(const json& j, const Path& path) const {
    if (!j.is_number_unsigned()) fail(path, "expected a nonnegative integer");
    return j.get<std::uint64_t>();
  }

  std::string string(const json& j, const Path& path) const {
    if (!j.is_string()) fail(path, "expected a string");
    return j.get<std::string>();
  }

  Vec vec(const json& j, const Path& path) const {
    if (!j.is_array()) fail(path, "expected an array of numbers");
    Vec out;
    for (const auto& x : j) out.push_back(number(x, path));
    return out;
  }

 private:
  const std::string& text_;
};

Path sub(Path p, const std::string& key) {
  p.push_back(key);
  return p;
}

}  // namespace

ObjectiveSpec RunConfig::make_objective() const {
  return cbo::make_objective(objective.name, objective.dim, objective.center);
}

RecordingPlan RunConfig::make_plan() const {
  RecordingPlan plan;
  plan.every = recording.every;
  plan.ball_radii = recording.ball_radii;
  return plan;
}

RunConfig parse_config(const std::string& text) {
  json root;
  try {
    root = json::parse(text);
  } catch (const json::parse_error& e) {
    const std::size_t byte = std::min<std::size_t>(e.byte, text.size());
    const std::size_t line =
        1 + static_cast<std::size_t>(std::count(text.begin(), text.begin() + static_cast<long>(byte > 0 ? byte - 1 : 0), '\n'));
    throw ConfigError(line, std::string("malformed JSON: ") + e.what());
  }

  const Reader r(text);
  r.expect_keys(root, {}, {"objective", "init", "params", "recording", "outputs", "preset", "theory", "mfa", "audit"});
  RunConfig cfg;

  if (root.contains("objective")) {
    const Path path{"objective"};
    const json& j = root["objective"];
    r.expect_keys(j, path, {"name", "dim", "center"});
    if (j.contains("name")) cfg.objective.name = r.string(j["name"], sub(path, "name"));
    if (j.contains("dim")) cfg.objective.dim = r.unsigned_int(j["dim"], sub(path, "dim"));
    if (j.contains("center")) cfg.objective.center = r.vec(j["center"], sub(path, "center"));
    if (cfg.objective.name != "rastrigin" && cfg.objective.name != "quadratic") {
      r.fail(sub(path, "name"), "unknown objective '" + cfg.objective.name + "' (expected rastrigin or quadratic)");
    }
    if (cfg.objective.dim == 0) r.fail(sub(path, "dim"), "must be positive");
    if (!cfg.objective.center.empty() && cfg.objective.center.size() != cfg.objective.dim) {
      r.fail(sub(path, "center"), "length does not match dim");
    }
  }
  const std::size_t dim = cfg.objective.dim;
  cfg.params.dim = dim;

  if (root.contains("init")) {
    const Path path{"init"};
    const json& j = root["init"];
    r.expect_keys(j, path, {"kind", "mean", "variance", "lo", "hi"});
    const std::string kind = j.contains("kind") ? r.string(j["kind"], sub(path, "kind")) : "gaussian";
    if (kind == "gaussian") {
      GaussianIsotropic g{Vec(dim, 0.0), 1.0};
      if (j.contains("mean")) g.mean = r.vec(j["mean"], sub(path, "mean"));
      if (j.contains("variance")) g.variance = r.number(j["variance"], sub(path, "variance"));
      if (g.mean.size() != dim) r.fail(sub(path, "mean"), "length does not match objective dim");
      if (!(g.variance > 0.0)) r.fail(sub(path, "variance"), "must be positive");
      cfg.init = g;
    } else if (kind == "uniform") {
      if (!j.contains("lo") || !j.contains("hi")) r.fail(path, "uniform init needs lo and hi");
      UniformBox box{r.vec(j["lo"], sub(path, "lo")), r.vec(j["hi"], sub(path, "hi"))};
      if (box.lo.size() != dim || box.hi.size() != dim) r.fail(sub(path, "lo"), "bounds do not match objective dim");
      for (std::size_t k = 0; k < dim; ++k) {
        if (!(box.lo[k] < box.hi[k])) r.fail(sub(path, "hi"), "requires lo < hi componentwise");
      }
      cfg.init = box;
    } else {
      r.fail(sub(path, "kind"), "unknown init kind '" + kind + "' (expected gaussian or uniform)");
    }
  } else {
    cfg.init = GaussianIsotropic{Vec(dim, 0.0), 1.0};
  }

  if (root.contains("params")) {
    const Path path{"params"};
    const json& j = root["params"];
    r.expect_keys(j, path, {"lambda", "sigma", "alpha", "dt", "steps", "n_particles", "dim", "h_variant", "seed"});
    auto& p = cfg.params;
    if (j.contains("lambda")) p.lambda = r.number(j["lambda"], sub(path, "lambda"));
    if (j.contains("sigma")) p.sigma = r.number(j["sigma"], sub(path, "sigma"));
    if (j.contains("alpha")) p.alpha = r.number(j["alpha"], sub(path, "alpha"));
    if (j.contains("dt")) p.dt = r.number(j["dt"], sub(path, "dt"));
    if (j.contains("steps")) p.steps = r.unsigned_int(j["steps"], sub(path, "steps"));
    if (j.contains("n_particles")) p.n_particles = r.unsigned_int(j["n_particles"], sub(path, "n_particles"));
    if (j.contains("seed")) p.seed = r.unsigned_int(j["seed"], sub(path, "seed"));
    if (j.contains("dim") && r.unsigned_int(j["dim"], sub(path, "dim")) != dim) {
      r.fail(sub(path, "dim"), "does not match objective dim");
    }
    if (j.contains("h_variant")) {
      const Path hpath = sub(path, "h_variant");
      const json& h = j["h_variant"];
      if (h.is_string()) {
        if (h.get<std::string>() != "const_one") r.fail(hpath, "expected \"const_one\" or {\"kind\": \"ramp\", \"delta\": ...}");
        p.h = ConstOne{};
      } else {
        r.expect_keys(h, hpath, {"kind", "delta"});
        const std::string kind = h.contains("kind") ? r.string(h["kind"], sub(hpath, "kind")) : "";
        if (kind == "const_one") {
          p.h = ConstOne{};
        } else if (kind == "ramp") {
          if (!h.contains("delta")) r.fail(hpath, "ramp needs delta");
          const double delta = r.number(h["delta"], sub(hpath, "delta"));
          if (!(delta > 0.0)) r.fail(sub(hpath, "delta"), "must be positive");
          p.h = RampHeaviside{delta};
        } else {
          r.fail(sub(hpath, "kind"), "expected const_one or ramp");
        }
      }
    }
    if (!(p.lambda >= 0.0)) r.fail(sub(path, "lambda"), "must be nonnegative");
    if (!(p.sigma >= 0.0)) r.fail(sub(path, "sigma"), "must be nonnegative");
    if (!(p.alpha > 0.0)) r.fail(sub(path, "alpha"), "must be positive");
    if (!(p.dt > 0.0)) r.fail(sub(path, "dt"), "must be positive");
    if (p.n_particles == 0) r.fail(sub(path, "n_particles"), "must be positive");
  }

  if (root.contains("recording")) {
    const Path path{"recording"};
    const json& j = root["recording"];
    r.expect_keys(j, path, {"every", "ball_radii"});
    if (j.contains("every")) cfg.recording.every = r.unsigned_int(j["every"], sub(path, "every"));
    if (j.contains("ball_radii")) cfg.recording.ball_radii = r.vec(j["ball_radii"], sub(path, "ball_radii"));
    if (cfg.recording.every == 0) r.fail(sub(path, "every"), "recording stride must be at least 1");
    for (double radius : cfg.recording.ball_radii) {
      if (!(radius > 0.0)) r.fail(sub(path, "ball_radii"), "radii must be positive");
    }
  }

  if (root.contains("outputs")) cfg.outputs = r.string(root["outputs"], {"outputs"});

  if (root.contains("preset")) {
    const std::string name = r.string(root["preset"], {"preset"});
    if (name == "fig-variance") cfg.preset = Preset::kFigVariance;
    else if (name == "fig-trajectories") cfg.preset = Preset::kFigTrajectories;
    else if (name == "mfa-sweep") cfg.preset = Preset::kMfaSweep;
    else if (name == "laplace-audit") cfg.preset = Preset::kLaplaceAudit;
    else r.fail({"preset"}, "unknown preset '" + name + "'");
  }

  if (root.contains("theory")) {
    const Path path{"theory"};
    const json& j = root["theory"];
    r.expect_keys(j, path, {"eps", "tau", "mass_radius", "b_bound", "laplace_q", "laplace_r"});
    auto& t = cfg.theory;
    if (j.contains("eps")) t.eps = r.number(j["eps"], sub(path, "eps"));
    if (j.contains("tau")) t.tau = r.number(j["tau"], sub(path, "tau"));
    if (j.contains("mass_radius")) t.mass_radius = r.number(j["mass_radius"], sub(path, "mass_radius"));
    if (j.contains("b_bound")) t.b_bound = r.number(j["b_bound"], sub(path, "b_bound"));
    if (j.contains("laplace_q")) t.laplace_q = r.number(j["laplace_q"], sub(path, "laplace_q"));
    if (j.contains("laplace_r")) t.laplace_r = r.number(j["laplace_r"], sub(path, "laplace_r"));
    if (!(t.tau >= 0.0 && t.tau < 1.0)) r.fail(sub(path, "tau"), "must lie in [0, 1)");
    if (!(t.mass_radius > 0.0)) r.fail(sub(path, "mass_radius"), "must be positive");
    if (!(t.laplace_r > 0.0)) r.fail(sub(path, "laplace_r"), "must be positive");
    if (!(t.laplace_q > 0.0)) r.fail(sub(path, "laplace_q"), "must be positive");
  }

  if (root.contains("mfa")) {
    const Path path{"mfa"};
    const json& j = root["mfa"];
    r.expect_keys(j, path, {"ns", "n_ref", "replications", "m_threshold"});
    auto& m = cfg.mfa;
    if (j.contains("ns")) {
      m.ns.clear();
      if (!j["ns"].is_array()) r.fail(sub(path, "ns"), "expected an array of particle counts");
      for (const auto& n : j["ns"]) m.ns.push_back(r.unsigned_int(n, sub(path, "ns")));
    }
    if (j.contains("n_ref")) m.n_ref = r.unsigned_int(j["n_ref"], sub(path, "n_ref"));
    if (j.contains("replications")) m.replications = r.unsigned_int(j["replications"], sub(path, "replications"));
    if (j.contains("m_threshold")) m.m_threshold = r.number(j["m_threshold"], sub(path, "m_threshold"));
  }
  cfg.mfa.dist = cfg.init;
  cfg.mfa.params = cfg.params;

  if (root.contains("audit")) {
    const Path path{"audit"};
    const json& j = root["audit"];
    r.expect_keys(j, path, {"measures", "max_particles", "max_dim", "min_inside", "seed"});
    auto& a = cfg.audit;
    if (j.contains("measures")) a.measures = r.unsigned_int(j["measures"], sub(path, "measures"));
    if (j.contains("max_particles")) a.max_particles = r.unsigned_int(j["max_particles"], sub(path, "max_particles"));
    if (j.contains("max_dim")) a.max_dim = r.unsigned_int(j["max_dim"], sub(path, "max_dim"));
    if (j.contains("min_inside")) a.min_inside = r.unsigned_int(j["min_inside"], sub(path, "min_inside"));
    if (j.contains("seed")) a.seed = r.unsigned_int(j["seed"], sub(path, "seed"));
  }
  return cfg;
}

RunConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError(0, "cannot read config file '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_config(buf.str());
}

}  // namespace cbo::cli
