#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "psrfr/distributions.hpp"
#include "psrfr/models.hpp"
#include "psrfr/types.hpp"

namespace psrfr {

/// One cell of the simulation grid: a model, a predictor law, a sample size
/// and the set of methods to fit on each replicate.
struct ExperimentConfig {
  ModelId model_id = ModelId::N1;
  DistributionSpec distribution;
  Index n = 0;
  Index p = 0;
  Index k = 0;                       // fitted dimension passed to the methods
  std::vector<std::string> methods;  // "psrfr", "ols", "phd", "sir", "save"
  Index slices = 10;                 // sir/save slice count
  Index replicates = 1;
  std::uint64_t base_seed = 0;
  double sigma_noise = 0.5;
};

/// Outcome of one (replicate, method) fit. status is "ok" or the error code
/// name recorded when the fit or the scoring failed; the numeric fields are
/// present only on success. Cosines are reported only for two-direction
/// truths scored against two-column estimates.
struct ReplicateRecord {
  Index replicate_index = 0;
  std::string method;
  std::optional<double> trace_correlation;
  std::optional<double> cos1;
  std::optional<double> cos2;
  std::string status = "ok";
};

/// Per-method summary over the successful replicates of one config. SDs use
/// the (count - 1) divisor; a single success reports sd = 0 and a fully
/// failed method leaves every moment field absent.
struct AggregateRow {
  ExperimentConfig config;
  std::string method;
  Index n_ok = 0;
  Index n_failed = 0;
  std::optional<double> mean_R;
  std::optional<double> sd_R;
  std::optional<double> mean_cos1;
  std::optional<double> sd_cos1;
  std::optional<double> mean_cos2;
  std::optional<double> sd_cos2;
};

struct ExperimentResult {
  ExperimentConfig config;
  std::vector<ReplicateRecord> records;
  std::vector<AggregateRow> rows;
};

/// Short machine id for the predictor law ("normal", "t", "pe", "mixture").
const char* dist_label(const DistributionSpec& spec);

/// Throws ConfigInvalid unless the config satisfies every invariant the
/// runner relies on (replicates >= 1, methods known and nonempty, n > p,
/// 1 <= k <= p, distribution dimensions matching p with a positive definite
/// sigma, positive slice count).
void validate_config(const ExperimentConfig& config);

/// Runs every replicate of one config. Replicate r draws predictors from
/// stream 2r and noise from stream 2r + 1 of base_seed, fits every method on
/// that same data and scores it against the model's true basis. Estimator and
/// scoring failures are recorded in the per-record status and never abort the
/// run. Records are ordered by (replicate, method) whatever the schedule;
/// workers <= 0 means one task per available core.
std::vector<ReplicateRecord> run_experiment(const ExperimentConfig& config,
                                            Index workers = 0);

/// Groups records by method (in config order) and summarizes the successes.
std::vector<AggregateRow> aggregate(const ExperimentConfig& config,
                                    const std::vector<ReplicateRecord>& records);

ExperimentResult run_and_aggregate(const ExperimentConfig& config,
                                   Index workers = 0);

/// CSV emitters. Numeric fields round-trip exactly; absent optionals are
/// empty fields; the nu column is filled only for t laws and beta only for
/// power exponential ones. Headers carry a leading timestamp comment line.
void write_replicate_csv(std::ostream& out,
                         const std::vector<ExperimentResult>& results);
void write_aggregate_csv(std::ostream& out,
                         const std::vector<ExperimentResult>& results);

/// Renders aggregate rows as markdown, one block per (model, law, p, k),
/// methods across the columns and an Average/SD pair of rows per sample size,
/// with 6 significant digits.
std::string markdown_table(const std::vector<AggregateRow>& rows);

/// Runs a list of configs in order and writes both CSV artifacts. Either path
/// may be empty to skip that file. Returns the concatenated aggregate rows.
std::vector<AggregateRow> grid(const std::vector<ExperimentConfig>& configs,
                               const std::string& replicate_csv_path,
                               const std::string& aggregate_csv_path,
                               Index workers = 0);

}  // namespace psrfr
