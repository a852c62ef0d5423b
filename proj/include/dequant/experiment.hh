#pragma once

#include <cstdint>
#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "dequant/rng.hh"
#include "dequant/types.hh"

namespace dequant {

/// Parsed experiment configuration.
///
///   [experiment]
///   pipeline = inner_product
///   trials = 200              # per epsilon value
///   confidence_floor = 0.99
///   epsilon = 0, 0.01, 0.02   # one trial block per value
///
///   [inner_product]           # parameters of the named pipeline
///   n = 1000
///   xi = 0.05
struct ExperimentConfig {
  std::string pipeline;
  Index trials = 0;
  double confidence_floor = 0.0;
  std::vector<double> epsilons{0.0};
  std::map<std::string, std::string> params;

  double number(const std::string& key, double fallback) const;
  Index integer(const std::string& key, Index fallback) const;
  std::string text(const std::string& key, const std::string& fallback) const;
  std::vector<double> numbers(const std::string& key, const std::vector<double>& fallback) const;
};

/// Throws std::invalid_argument on schema violations: unknown pipeline,
/// unknown parameter keys, trials < 1, floor outside [0, 1], bad numbers.
ExperimentConfig parse_config(std::istream& in);
ExperimentConfig load_config(const std::string& path);

/// Pipelines and kernels runnable from a config.
const std::vector<std::string>& pipeline_names();
/// Parameter keys accepted by a pipeline section.
const std::vector<std::string>& pipeline_keys(const std::string& pipeline);

struct TrialRecord {
  Index trial = 0;
  double epsilon = 0.0;
  Index r = 0;
  Index c = 0;
  double measured_error = 0.0;
  double theorem_bound = 0.0;
  bool pass = false;
  std::string status = "ok";  // ok | epsilon-violation | error:<what>
};

/// One trial; the instance and the algorithm use independent children of `rng`.
TrialRecord run_trial(const ExperimentConfig& config, double epsilon, Index trial, Rng rng);

struct ExperimentReport {
  std::string pipeline;
  std::vector<TrialRecord> rows;  // sorted by trial index
  double pass_rate = 0.0;
  double confidence_floor = 0.0;
  bool meets_floor() const { return pass_rate >= confidence_floor; }
};

/// Trial t uses Rng(seed).split(t); results are independent of `jobs`.
ExperimentReport run_experiment(const ExperimentConfig& config, std::uint64_t seed, int jobs = 1);

/// Header: trial,pipeline,epsilon,r,c,measured_error,theorem_bound,pass,status
/// followed by one row per trial and a final row
/// summary,<pipeline>,,,,<pass_rate>,<confidence_floor>,<0|1>,<passed>/<total>
void write_report_csv(std::ostream& out, const ExperimentReport& report);

// ---------------------------------------------------------------------------
// Instance generation

struct GenerateSpec {
  std::string kind = "spectrum";  // spectrum | identity | sparse | gaussian | vector
  Index m = 60;
  Index n = 50;
  Index rank = 5;
  std::vector<double> spectrum;   // explicit singular values; overrides the gap placement
  std::optional<double> gap_sigma;
  double gap_xi = 0.2;
  Index sparsity = 2;
  bool normalize = false;         // rescale to unit Frobenius norm
};

/// `rank` singular values in (0, 1], none inside [sigma (1 - xi), sigma (1 + xi)).
std::vector<double> gap_spectrum(Index rank, double sigma, double xi, Rng& rng);

/// Matrix (or m x 1 column for `vector`) described by the spec.
Mat generate_instance(const GenerateSpec& spec, std::uint64_t seed);

}  // namespace dequant
