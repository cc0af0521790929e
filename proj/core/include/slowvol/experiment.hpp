#pragma once

#include <filesystem>
#include <iosfwd>
#include <map>
#include <string>
#include <vector>

#include "slowvol/flow_models.hpp"

namespace slowvol {

// One section of the run configuration. Keys are kept as text and validated
// when the experiment runs; unknown keys are rejected.
struct ExperimentConfig {
  std::string id;
  std::string kind;  // group_growth | flow_growth | gamma_eval | reduction_check | integral_lemma
  std::map<std::string, std::string> params;
  // Directory that relative paths in params are resolved against.
  std::filesystem::path base_dir;
};

struct RunConfig {
  std::filesystem::path out_dir = "results";
  std::vector<ExperimentConfig> experiments;
};

// INI text: an optional [run] section with `out = DIR`, then one section per
// experiment with a mandatory `kind` key. Throws ConfigError.
RunConfig parse_run_config(std::istream& in, const std::filesystem::path& base_dir = ".");
RunConfig load_run_config(const std::filesystem::path& path);

enum class Verdict { pass, fail, error };
std::string_view to_string(Verdict v);

struct SummaryRow {
  std::string id;
  std::string kind;
  // Measured exponent; +inf for exponential growth, NaN after budget
  // exhaustion.
  double measured = 0.0;
  std::string classification;
  // Lower bound the measurement is checked against; +inf allowed.
  double bound = 0.0;
  double tolerance = 0.0;
  Verdict verdict = Verdict::error;
  std::string message;
  double seconds = 0.0;
};

// PASS iff measured >= bound - tolerance, or the growth is exponential and
// the bound is infinite.
Verdict decide(double measured, bool exponential, double bound, double tolerance);

// Builds a model from the keys model, dimension, metric, drift, fourier.
HamiltonianModel model_from_params(const std::map<std::string, std::string>& params);

// Runs one experiment, writing its CSV files into out_dir. Library errors are
// reported as verdict ERROR; configuration errors too, with the message.
SummaryRow run_experiment(const ExperimentConfig& config, const std::filesystem::path& out_dir);

// Runs every experiment in order and appends the table to out_dir/summary.txt.
std::vector<SummaryRow> run(const RunConfig& config);

void write_summary(std::ostream& out, const std::vector<SummaryRow>& rows);

}  // namespace slowvol
