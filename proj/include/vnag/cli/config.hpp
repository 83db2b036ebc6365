#pragma once

#include "vnag/serialize.hpp"

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

namespace vnag::cli {

/// Invalid or unreadable configuration; maps to exit code 2.
class ConfigError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

struct Interval {
  double t1;
  double t2;
};

/// Parameter lists swept by an experiment.  Empty lists mean "not swept".
struct Sweep {
  std::vector<double> beta;
  std::vector<double> alpha;
  std::vector<double> eps;
  std::vector<double> c;
  std::vector<double> sigma;
  std::vector<double> lengths;
  std::vector<int> k;
};

/// Bregman schedule α = log(p/t), β = p log t + log(scale), γ = p log t.
struct BregmanSpec {
  double p = 2.0;
  double scale = 0.25;
};

struct ExperimentConfig {
  std::string experiment;
  std::optional<Potential> potential;
  std::optional<DampingSchedule> damping;
  std::optional<Interval> interval;
  std::size_t n_steps = 4000;
  std::optional<Vector> x0;
  std::optional<Vector> v0;
  /// Perturbation descriptors; fourier entries without a seed inherit `seed`.
  Json perturbations = Json::array();
  Sweep sweep;
  std::optional<BregmanSpec> bregman;
  std::uint64_t seed = 0;
  /// The parsed document with the effective seed, echoed into reports.
  Json echo;
};

/// Validates a configuration document.  Unknown fields are rejected.
ExperimentConfig parse_config(Json doc, std::optional<std::uint64_t> seed_override = std::nullopt);

/// Reads and parses a JSON file; every failure is a ConfigError.
ExperimentConfig load_config(const std::filesystem::path& path, std::optional<std::uint64_t> seed_override);

/// Perturbations of the config, built on [t1, t2].
std::vector<Perturbation> build_perturbations(const ExperimentConfig& cfg, double t1, double t2);

/// Accessors that raise ConfigError when the field is absent.
const Potential& require_potential(const ExperimentConfig& cfg);
const DampingSchedule& require_damping(const ExperimentConfig& cfg);
const Interval& require_interval(const ExperimentConfig& cfg);

}  // namespace vnag::cli
