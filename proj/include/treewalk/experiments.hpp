#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "treewalk/graph.hpp"

namespace treewalk {

enum class ExperimentKind { Spectrum, IprPhase, IprCenter, Dynamics, LocalDecay, MaxDepth, Scattering, Classical };

std::string to_string(ExperimentKind k);
ExperimentKind experiment_kind_from_string(const std::string& name);
std::vector<std::string> experiment_kind_names();

/// Invalid configuration; field() names the offending key.
class ConfigError : public std::invalid_argument {
 public:
  ConfigError(std::string field, const std::string& message);
  const std::string& field() const { return field_; }

 private:
  std::string field_;
};

/// Raw key -> tokens, as read from a config file or the command line. Keys
/// are the long flag names without dashes ("delta-e", "t-max", ...); list
/// values are split on commas and may use a:b:step ranges.
using RawConfig = std::map<std::string, std::vector<std::string>>;

/// Every key a config may carry, in serialization order.
const std::vector<std::string>& config_keys();

struct ExperimentConfig {
  ExperimentKind kind = ExperimentKind::Spectrum;
  std::vector<int> depths;
  std::vector<double> widths;
  std::vector<int> realizations;  // one entry, or one per depth
  std::uint64_t seed = 0;
  Variant variant = Variant::SGT;
  double gamma = 1.0;
  double delta_e = 0.15;          // ipr-phase window half-width
  std::int64_t window = 100;      // ipr-center state count
  double t_max = 0.0;             // 0: 3 t_hit of each depth
  std::size_t t_points = 300;
  std::vector<double> momenta;    // scattering
  int start_column = 0;
  std::string out;
  unsigned workers = 0;           // runtime only, never serialized

  int realizations_for(std::size_t depth_index) const;
};

/// Fills kind-specific defaults and validates. The seed is mandatory.
ExperimentConfig resolve_config(const RawConfig& raw);

/// Flat `key = value` text that resolve_config reads back to the same config.
std::string to_config_text(const ExperimentConfig& cfg);

/// git-describe style version baked in at build time.
std::string version_string();

/// Output directory: cfg.out, else $TREEWALK_OUT/<kind>, else results/<kind>.
std::filesystem::path output_directory(const ExperimentConfig& cfg);

struct RunResult {
  std::filesystem::path directory;
  std::vector<std::string> files;
  double wall_seconds = 0.0;
};

/// Runs the experiment into `<out>.partial`, then moves it into place. On
/// failure the partial directory is removed and the error rethrown.
RunResult run_experiment(const ExperimentConfig& cfg);

}  // namespace treewalk
