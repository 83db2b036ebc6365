#pragma once

#include "vnag/cli/config.hpp"
#include "vnag/cli/output.hpp"

#include <string>
#include <vector>

namespace vnag::cli {

/// Reproduction targets accepted by `reproduce` in the "experiment" field.
inline const std::vector<std::string> kFigures{"fig1", "fig2", "fig3", "unbounded", "poly"};

/// Each runner returns trajectory.csv, report.json and figure.svg.  Invalid
/// configurations raise ConfigError, numerical failures NumericalError.
OutputSet run_simulate(const ExperimentConfig& cfg);
OutputSet run_second_variation(const ExperimentConfig& cfg);
OutputSet run_classify(const ExperimentConfig& cfg);
OutputSet run_reproduce(const ExperimentConfig& cfg);

/// Rows of a CSV document with 17-significant-digit numbers.
class CsvWriter {
 public:
  explicit CsvWriter(const std::vector<std::string>& header);
  void row(const std::vector<double>& values);
  const std::string& str() const { return text_; }

 private:
  std::size_t columns_;
  std::string text_;
};

/// Pretty-printed JSON with a trailing newline.
std::string dump(const Json& j);

/// Triangles whose δ²J changes sign between consecutive sweep values of ε.
struct SignChange {
  double eps_lo;
  double eps_hi;
};
std::vector<SignChange> sign_changes(const std::vector<double>& eps, const std::vector<double>& values);

/// Small-ε and large-ε triangle pair whose second variations have opposite
/// signs, centred on [t1, t2] for vanishing damping 3/t and curvature λ.
/// Requires t2 − t1 > √(40/λ).
struct IndefinitenessWitness {
  double c;
  double eps_small;
  double eps_large;
  double d2j_small;
  double d2j_large;
};
IndefinitenessWitness saddle_witness(double lambda, double t1, double t2);

}  // namespace vnag::cli
