#include "psrfr/dataio.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <numeric>
#include <sstream>

#include "json.hpp"
#include "psrfr/errors.hpp"
#include "psrfr/estimators.hpp"
#include "psrfr/numerics.hpp"

namespace psrfr {

namespace {

std::string trim(const std::string& s) {
  std::size_t b = 0;
  std::size_t e = s.size();
  while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
  while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
  return s.substr(b, e - b);
}

std::string unquote(const std::string& s) {
  if (s.size() >= 2 && s.front() == '"' && s.back() == '"')
    return s.substr(1, s.size() - 2);
  return s;
}

std::vector<std::string> split_line(const std::string& line, char delimiter) {
  std::vector<std::string> fields;
  std::string field;
  std::istringstream in(line);
  while (std::getline(in, field, delimiter)) fields.push_back(field);
  if (!line.empty() && line.back() == delimiter) fields.push_back("");
  return fields;
}

// Returns false for a missing (empty) cell, throws ParseError for anything
// that is not a finite number.
bool parse_cell(const std::string& raw, Index row, const std::string& column,
                double& value) {
  std::string text = trim(unquote(trim(raw)));
  if (text.empty()) return false;
  const char* begin = text.c_str();
  char* end = nullptr;
  value = std::strtod(begin, &end);
  if (end != begin + text.size() || !std::isfinite(value))
    fail(ErrorCode::ParseError, "row " + std::to_string(row) + ", column '" +
                                    column + "': cannot parse '" + text + "'");
  return true;
}

std::string sanitize_name(const std::string& name) {
  std::string out;
  for (char c : name) {
    if (std::isalnum(static_cast<unsigned char>(c)))
      out.push_back(static_cast<char>(
          std::tolower(static_cast<unsigned char>(c))));
    else
      out.push_back('_');
  }
  if (out.empty()) out = "column";
  return out;
}

std::string format_sig6(double x) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.6g", x);
  return buf;
}

}  // namespace

Dataset load_csv(const std::string& path, const std::string& response_column,
                 char delimiter, std::optional<Index> row_limit) {
  std::ifstream in(path);
  if (!in) fail(ErrorCode::IoError, "cannot open '" + path + "'");

  std::string line;
  if (!std::getline(in, line))
    fail(ErrorCode::ParseError, "'" + path + "' has no header line");
  if (!line.empty() && line.back() == '\r') line.pop_back();

  std::vector<std::string> header;
  for (const std::string& raw : split_line(line, delimiter)) {
    std::string name = trim(unquote(trim(raw)));
    if (name.empty())
      fail(ErrorCode::ParseError, "empty column name in header");
    if (std::find(header.begin(), header.end(), name) != header.end())
      fail(ErrorCode::ParseError, "duplicate column name '" + name + "'");
    header.push_back(std::move(name));
  }

  auto response_it =
      std::find(header.begin(), header.end(), response_column);
  if (response_it == header.end())
    fail(ErrorCode::MissingColumn,
         "'" + response_column + "' not found in '" + path + "'");
  const std::size_t response_pos =
      static_cast<std::size_t>(response_it - header.begin());

  Dataset ds;
  ds.response_name = response_column;
  for (std::size_t j = 0; j < header.size(); ++j)
    if (j != response_pos) ds.column_names.push_back(header[j]);
  if (ds.column_names.empty())
    fail(ErrorCode::ParseError, "'" + path + "' has no predictor columns");

  std::vector<std::vector<double>> rows;
  std::vector<double> responses;
  Index data_row = 0;
  Index rejected = 0;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (trim(line).empty()) continue;
    if (row_limit && data_row >= *row_limit) break;
    ++data_row;
    std::vector<std::string> fields = split_line(line, delimiter);
    if (fields.size() > header.size())
      fail(ErrorCode::ParseError,
           "row " + std::to_string(data_row) + " has " +
               std::to_string(fields.size()) + " fields, expected " +
               std::to_string(header.size()));
    fields.resize(header.size());  // short rows read as missing cells

    std::vector<double> row(ds.column_names.size());
    double response_value = 0.0;
    bool complete = true;
    std::size_t out_j = 0;
    for (std::size_t j = 0; j < header.size() && complete; ++j) {
      double value = 0.0;
      if (!parse_cell(fields[j], data_row, header[j], value)) {
        complete = false;
        break;
      }
      if (j == response_pos)
        response_value = value;
      else
        row[out_j++] = value;
    }
    if (!complete) {
      ++rejected;
      continue;
    }
    rows.push_back(std::move(row));
    responses.push_back(response_value);
  }

  if (rows.size() < 2)
    fail(ErrorCode::InsufficientRows,
         "'" + path + "' yields " + std::to_string(rows.size()) +
             " usable rows (need at least 2)");

  const Index n = static_cast<Index>(rows.size());
  const Index p = static_cast<Index>(ds.column_names.size());
  Matrix values(n, p);
  for (Index i = 0; i < n; ++i)
    for (Index j = 0; j < p; ++j)
      values(i, j) = rows[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)];
  ds.predictors = DataMatrix::from(std::move(values));
  ds.response = Eigen::Map<Vector>(responses.data(), n);
  ds.rejected_rows = rejected;
  return ds;
}

Dataset standardize(const Dataset& ds) {
  const Matrix& x = ds.predictors.values;
  const Index n = x.rows();
  const Index p = x.cols();
  Matrix out(n, p);
  for (Index j = 0; j < p; ++j) {
    double mean = x.col(j).mean();
    Vector centered = x.col(j).array() - mean;
    double sd = std::sqrt(centered.squaredNorm() /
                          static_cast<double>(n - 1));
    double scale = 1e-12 * std::max(1.0, x.col(j).cwiseAbs().maxCoeff());
    if (sd <= scale)
      fail(ErrorCode::ZeroVariance, "column '" +
                                        ds.column_names[static_cast<std::size_t>(j)] +
                                        "' has no variation");
    out.col(j) = centered / sd;
  }
  Dataset result;
  result.column_names = ds.column_names;
  result.predictors = DataMatrix::from(std::move(out));
  result.response = ds.response;
  result.response_name = ds.response_name;
  result.rejected_rows = ds.rejected_rows;
  return result;
}

AnalysisReport analyze(const Dataset& ds, double proportion_threshold) {
  if (!(proportion_threshold > 0.0) || proportion_threshold > 1.0)
    fail(ErrorCode::ConfigInvalid, "proportion threshold must lie in (0, 1]");
  Dataset scaled = standardize(ds);
  const Index p = scaled.predictors.p();

  Centered stats = center_and_covariance(scaled.predictors);
  EigenPairs eig = sym_eig_desc(stats.covariance);
  const Matrix& rotation = eig.vectors;

  DataMatrix rotated = DataMatrix::from(stats.centered * rotation);
  SubspaceEstimate fit = psrfr_fit(rotated, scaled.response, p);

  double total = fit.eigenvalues.sum();
  AnalysisReport report;
  report.rotation = rotation;
  report.eigenvalue_proportions = fit.eigenvalues / total;

  report.chosen_k = p;
  double cumulative = 0.0;
  for (Index i = 0; i < p; ++i) {
    cumulative += report.eigenvalue_proportions[i];
    if (cumulative >= proportion_threshold) {
      report.chosen_k = i + 1;
      break;
    }
  }

  Vector loadings = (rotation * fit.basis.col(0)).cwiseAbs();
  std::vector<Index> order(static_cast<std::size_t>(p));
  std::iota(order.begin(), order.end(), Index{0});
  std::stable_sort(order.begin(), order.end(), [&](Index a, Index b) {
    return loadings[a] > loadings[b];
  });
  for (Index idx : order)
    report.importance.emplace_back(
        ds.column_names[static_cast<std::size_t>(idx)], loadings[idx]);
  return report;
}

double normal_quantile(double prob) {
  if (!(prob > 0.0) || !(prob < 1.0))
    fail(ErrorCode::ConfigInvalid, "normal quantile needs prob in (0, 1)");

  // Acklam's rational approximation, |relative error| < 1.15e-9.
  static const double a[] = {-3.969683028665376e+01, 2.209460984245205e+02,
                             -2.759285104469687e+02, 1.383577518672690e+02,
                             -3.066479806614716e+01, 2.506628277459239e+00};
  static const double b[] = {-5.447609879822406e+01, 1.615858368580409e+02,
                             -1.556989798598866e+02, 6.680131188771972e+01,
                             -1.328068155288572e+01};
  static const double c[] = {-7.784894002430293e-03, -3.223964580411365e-01,
                             -2.400758277161838e+00, -2.549732539343734e+00,
                             4.374664141464968e+00,  2.938163982698783e+00};
  static const double d[] = {7.784695709041462e-03, 3.224671290700398e-01,
                             2.445134137142996e+00, 3.754408661907416e+00};
  const double plow = 0.02425;

  double x;
  if (prob < plow) {
    double q = std::sqrt(-2.0 * std::log(prob));
    x = (((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
        ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
  } else if (prob <= 1.0 - plow) {
    double q = prob - 0.5;
    double r = q * q;
    x = (((((a[0] * r + a[1]) * r + a[2]) * r + a[3]) * r + a[4]) * r + a[5]) *
        q /
        (((((b[0] * r + b[1]) * r + b[2]) * r + b[3]) * r + b[4]) * r + 1.0);
  } else {
    double q = std::sqrt(-2.0 * std::log(1.0 - prob));
    x = -(((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q +
          c[5]) /
        ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
  }

  // One Halley step against the exact CDF expressed through erfc.
  static const double sqrt2 = std::sqrt(2.0);
  static const double inv_sqrt2pi = 1.0 / std::sqrt(8.0 * std::atan(1.0));
  double cdf = 0.5 * std::erfc(-x / sqrt2);
  double pdf = inv_sqrt2pi * std::exp(-0.5 * x * x);
  double u = (cdf - prob) / pdf;
  x -= u / (1.0 + 0.5 * x * u);
  return x;
}

std::vector<std::string> write_qq_csvs(const Dataset& ds,
                                       const std::string& directory) {
  namespace fs = std::filesystem;
  std::error_code ec;
  fs::create_directories(directory, ec);
  if (!fs::is_directory(directory))
    fail(ErrorCode::IoError, "cannot use directory '" + directory + "'");

  const Index n = ds.predictors.n();
  std::vector<std::string> written;
  std::vector<std::string> used;
  for (Index j = 0; j < ds.predictors.p(); ++j) {
    std::string base =
        sanitize_name(ds.column_names[static_cast<std::size_t>(j)]);
    std::string candidate = base;
    int suffix = 2;
    while (std::find(used.begin(), used.end(), candidate) != used.end())
      candidate = base + "_" + std::to_string(suffix++);
    used.push_back(candidate);

    fs::path path = fs::path(directory) / ("qq_" + candidate + ".csv");
    std::ofstream out(path);
    if (!out)
      fail(ErrorCode::IoError, "cannot open '" + path.string() + "'");
    out << "theoretical,sample\n";
    Vector sorted = ds.predictors.values.col(j);
    std::sort(sorted.begin(), sorted.end());
    out.precision(17);
    for (Index i = 0; i < n; ++i) {
      double prob = (static_cast<double>(i) + 0.5) / static_cast<double>(n);
      out << normal_quantile(prob) << "," << sorted[i] << "\n";
    }
    if (!out) fail(ErrorCode::IoError, "write to '" + path.string() + "' failed");
    written.push_back(path.string());
  }
  return written;
}

std::string report_text(const AnalysisReport& report) {
  nlohmann::ordered_json doc;
  doc["eigenvalue_proportions"] = std::vector<double>(
      report.eigenvalue_proportions.begin(), report.eigenvalue_proportions.end());
  doc["chosen_k"] = report.chosen_k;
  nlohmann::ordered_json importance = nlohmann::ordered_json::array();
  for (const auto& [name, loading] : report.importance) {
    nlohmann::ordered_json entry;
    entry["variable"] = name;
    entry["loading"] = loading;
    importance.push_back(std::move(entry));
  }
  doc["importance"] = std::move(importance);
  nlohmann::ordered_json rotation = nlohmann::ordered_json::array();
  for (Index i = 0; i < report.rotation.rows(); ++i) {
    std::vector<double> row(static_cast<std::size_t>(report.rotation.cols()));
    for (Index j = 0; j < report.rotation.cols(); ++j)
      row[static_cast<std::size_t>(j)] = report.rotation(i, j);
    rotation.push_back(row);
  }
  doc["rotation"] = std::move(rotation);
  return doc.dump(2) + "\n";
}

std::string importance_table(const AnalysisReport& report) {
  std::ostringstream out;
  out << "| rank | variable | loading |\n| --- | --- | --- |\n";
  int rank = 1;
  for (const auto& [name, loading] : report.importance)
    out << "| " << rank++ << " | " << name << " | " << format_sig6(loading)
        << " |\n";
  return out.str();
}

}  // namespace psrfr
