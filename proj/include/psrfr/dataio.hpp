#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "psrfr/types.hpp"

namespace psrfr {

/// A loaded table: predictor columns in file order plus the response pulled
/// out by name. Rows containing a missing (empty) value are dropped during
/// ingestion and counted in rejected_rows.
struct Dataset {
  std::vector<std::string> column_names;  // predictor names, file order
  DataMatrix predictors;
  Vector response;
  std::string response_name;
  Index rejected_rows = 0;
};

/// Result of the rotated-coordinates pipeline: eigenvalue proportions of the
/// square response kernel, the smallest dimension whose cumulative proportion
/// reaches the threshold, and the per-variable absolute loadings of the
/// leading direction mapped back to original coordinates.
struct AnalysisReport {
  Vector eigenvalue_proportions;
  Index chosen_k = 0;
  std::vector<std::pair<std::string, double>> importance;
  Matrix rotation;  // p x p eigenvectors used for diagonalization
};

/// Parses a headered delimited file. Every column other than response_column
/// becomes a predictor, in file order. Surrounding double quotes on header or
/// data cells are stripped. row_limit caps the number of data rows read.
/// Throws IoError (unreadable file), MissingColumn, ParseError (nonnumeric or
/// malformed cells, duplicate or empty header names) and InsufficientRows
/// when no usable rows remain.
Dataset load_csv(const std::string& path, const std::string& response_column,
                 char delimiter = ',',
                 std::optional<Index> row_limit = std::nullopt);

/// Centers each predictor column and scales it to unit sample SD with the
/// (n - 1) divisor. The response is untouched. Throws ZeroVariance naming the
/// first offending column.
Dataset standardize(const Dataset& ds);

/// Standardizes, rotates onto the covariance eigenbasis, runs the square
/// response fit with k = p and reports proportions, the chosen dimension and
/// the back-rotated importance ranking. Estimator errors propagate.
AnalysisReport analyze(const Dataset& ds, double proportion_threshold = 0.99);

/// Inverse standard normal CDF (Acklam's rational approximation polished by
/// one Halley step against std::erfc). Domain (0, 1).
double normal_quantile(double prob);

/// Writes one CSV per predictor into directory, each row holding
/// (theoretical normal quantile, sample quantile) for plotting. Returns the
/// written paths. Throws IoError when the directory is unusable.
std::vector<std::string> write_qq_csvs(const Dataset& ds,
                                       const std::string& directory);

/// JSON-formatted report text (proportions, chosen_k, importance, rotation).
std::string report_text(const AnalysisReport& report);

/// Markdown table of the importance ranking, 6 significant digits.
std::string importance_table(const AnalysisReport& report);

}  // namespace psrfr
