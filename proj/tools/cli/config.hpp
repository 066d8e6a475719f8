#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "cbo/engine.hpp"
#include "cbo/ensemble.hpp"
#include "cbo/mfa.hpp"
#include "cbo/objectives.hpp"
#include "cbo/theory.hpp"

namespace cbo::cli {

enum class Preset { kFigVariance, kFigTrajectories, kMfaSweep, kLaplaceAudit };

/// Malformed configuration. `line` is 1-based, 0 when no location is known.
class ConfigError : public std::runtime_error {
 public:
  ConfigError(std::size_t line, const std::string& message);
  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

struct ObjectiveConfig {
  std::string name = "rastrigin";
  std::size_t dim = 1;
  Vec center;
};

struct RecordingConfig {
  std::size_t every = 1;
  std::vector<double> ball_radii;
};

struct RunConfig {
  ObjectiveConfig objective;
  InitDistribution init = GaussianIsotropic{{0.0}, 1.0};
  CboParams params;
  RecordingConfig recording;
  std::string outputs = "out";
  std::optional<Preset> preset;

  theory::ReportSettings theory;
  mfa::SweepConfig mfa;  // dist and params are filled from the sections above
  theory::LaplaceAuditConfig audit;

  ObjectiveSpec make_objective() const;
  RecordingPlan make_plan() const;
};

/// Parses the JSON config text. Unknown keys, wrong types and inconsistent
/// dimensions raise ConfigError pointing at the offending line.
RunConfig parse_config(const std::string& text);
RunConfig load_config(const std::string& path);

const char* preset_name(Preset p);

}  // namespace cbo::cli
