#include "psrfr/montecarlo.hpp"

#include <algorithm>
#include <atomic>
#include <charconv>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <ctime>
#include <fstream>
#include <ostream>
#include <sstream>
#include <thread>
#include <utility>

#include <Eigen/Cholesky>

#include "psrfr/errors.hpp"
#include "psrfr/estimators.hpp"
#include "psrfr/metrics.hpp"

namespace psrfr {

namespace {

const char* const kKnownMethods[] = {"psrfr", "ols", "phd", "sir", "save"};

bool known_method(const std::string& name) {
  for (const char* m : kKnownMethods) {
    if (name == m) return true;
  }
  return false;
}

// Shortest exact decimal form; round-trips through strtod.
std::string format_full(double x) {
  char buf[40];
  auto res = std::to_chars(buf, buf + sizeof(buf), x);
  return std::string(buf, res.ptr);
}

std::string format_opt(const std::optional<double>& x) {
  return x ? format_full(*x) : std::string();
}

std::string format_sig6(double x) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.6g", x);
  return buf;
}

std::string nu_field(const DistributionSpec& spec) {
  return spec.kind == DistKind::StudentT ? format_full(spec.nu) : std::string();
}

std::string beta_field(const DistributionSpec& spec) {
  return spec.kind == DistKind::PowerExponential ? format_full(spec.beta)
                                                 : std::string();
}

std::string timestamp_comment() {
  std::time_t now =
      std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm utc{};
  gmtime_r(&now, &utc);
  char buf[48];
  std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", &utc);
  return std::string("# generated ") + buf + "\n";
}

// Distribution copy with an empty mu promoted to the zero vector.
DistributionSpec prepared_law(const ExperimentConfig& config) {
  DistributionSpec law = config.distribution;
  if (law.mu.size() == 0) law.mu = Vector::Zero(config.p);
  return law;
}

SubspaceEstimate fit_method(const std::string& method, const DataMatrix& data,
                            const Vector& response, Index k, Index slices) {
  if (method == "psrfr") return psrfr_fit(data, response, k);
  if (method == "ols") return ols_direction(data, response);
  if (method == "phd") return phd_fit(data, response, k);
  if (method == "sir") return sir_fit(data, response, k, slices);
  if (method == "save") return save_fit(data, response, k, slices);
  fail(ErrorCode::ConfigInvalid, "unknown method '" + method + "'");
}

struct Moments {
  std::optional<double> mean;
  std::optional<double> sd;
};

Moments moments_of(const std::vector<double>& xs) {
  Moments m;
  if (xs.empty()) return m;
  double mean = 0.0;
  for (double x : xs) mean += x;
  mean /= static_cast<double>(xs.size());
  m.mean = mean;
  if (xs.size() == 1) {
    m.sd = 0.0;
    return m;
  }
  double ss = 0.0;
  for (double x : xs) ss += (x - mean) * (x - mean);
  m.sd = std::sqrt(ss / static_cast<double>(xs.size() - 1));
  return m;
}

std::string dist_display(const DistributionSpec& spec) {
  switch (spec.kind) {
    case DistKind::Normal:
      return "normal";
    case DistKind::StudentT:
      if (spec.nu == 1.0) return "cauchy";
      return "t (nu = " + format_sig6(spec.nu) + ")";
    case DistKind::PowerExponential:
      return "pe (beta = " + format_sig6(spec.beta) + ")";
    case DistKind::Mixture:
      return "mixture";
  }
  return "unknown";
}

void fill_failure(std::vector<ReplicateRecord>& records, Index first, Index m,
                  const char* status) {
  for (Index i = 0; i < m; ++i) records[first + i].status = status;
}

}  // namespace

const char* dist_label(const DistributionSpec& spec) {
  switch (spec.kind) {
    case DistKind::Normal:
      return "normal";
    case DistKind::StudentT:
      return "t";
    case DistKind::PowerExponential:
      return "pe";
    case DistKind::Mixture:
      return "mixture";
  }
  return "unknown";
}

void validate_config(const ExperimentConfig& config) {
  if (config.replicates < 1)
    fail(ErrorCode::ConfigInvalid, "replicates must be at least 1");
  if (config.methods.empty())
    fail(ErrorCode::ConfigInvalid, "methods list is empty");
  for (const std::string& m : config.methods) {
    if (!known_method(m))
      fail(ErrorCode::ConfigInvalid, "unknown method '" + m + "'");
  }
  if (config.p < 1) fail(ErrorCode::ConfigInvalid, "p must be positive");
  if (config.n <= config.p)
    fail(ErrorCode::ConfigInvalid, "n must exceed p");
  if (config.k < 1 || config.k > config.p)
    fail(ErrorCode::ConfigInvalid, "k must lie in [1, p]");
  if (config.slices < 1)
    fail(ErrorCode::ConfigInvalid, "slices must be positive");
  if (!std::isfinite(config.sigma_noise) || config.sigma_noise < 0.0)
    fail(ErrorCode::ConfigInvalid, "sigma_noise must be finite and nonnegative");

  const DistributionSpec& d = config.distribution;
  if (d.mu.size() != 0 && d.mu.size() != config.p)
    fail(ErrorCode::ConfigInvalid, "distribution mu length does not match p");
  if (d.sigma.rows() != config.p || d.sigma.cols() != config.p)
    fail(ErrorCode::ConfigInvalid, "distribution sigma must be p x p");
  Eigen::LLT<Matrix> llt(d.sigma);
  if (llt.info() != Eigen::Success)
    fail(ErrorCode::ConfigInvalid, "distribution sigma is not positive definite");

  try {
    default_spec(config.model_id, config.p, config.sigma_noise);
    sample(prepared_law(config), 2, SeededStream{config.base_seed, 0});
  } catch (const Error& e) {
    fail(ErrorCode::ConfigInvalid, e.what());
  }
}

std::vector<ReplicateRecord> run_experiment(const ExperimentConfig& config,
                                            Index workers) {
  validate_config(config);
  const ModelSpec truth =
      default_spec(config.model_id, config.p, config.sigma_noise);
  const DistributionSpec law = prepared_law(config);
  const Index m = static_cast<Index>(config.methods.size());

  std::vector<ReplicateRecord> records(
      static_cast<std::size_t>(config.replicates * m));
  for (Index r = 0; r < config.replicates; ++r) {
    for (Index i = 0; i < m; ++i) {
      ReplicateRecord& rec = records[static_cast<std::size_t>(r * m + i)];
      rec.replicate_index = r;
      rec.method = config.methods[static_cast<std::size_t>(i)];
    }
  }

  auto run_replicate = [&](Index r) {
    const Index first = r * m;
    try {
      const std::uint64_t pred_stream = 2 * static_cast<std::uint64_t>(r);
      DataMatrix predictors =
          sample(law, config.n, SeededStream{config.base_seed, pred_stream});
      RandomStream noise_stream(SeededStream{config.base_seed, pred_stream + 1});
      Vector noise(config.n);
      for (Index j = 0; j < config.n; ++j) noise[j] = noise_stream.normal();
      LabeledSample sample_r =
          generate(truth, std::move(predictors), noise,
                   SeededStream{config.base_seed, pred_stream + 1});

      for (Index i = 0; i < m; ++i) {
        ReplicateRecord& rec = records[static_cast<std::size_t>(first + i)];
        try {
          SubspaceEstimate est =
              fit_method(rec.method, sample_r.predictors, sample_r.response,
                         config.k, config.slices);
          rec.trace_correlation =
              trace_correlation(truth.true_basis, est.basis);
          if (truth.true_basis.cols() == 2 && est.basis.cols() == 2) {
            auto [c1, c2] = direction_cosines(truth.true_basis, est.basis);
            rec.cos1 = c1;
            rec.cos2 = c2;
          }
          rec.status = "ok";
        } catch (const Error& e) {
          rec.status = e.code_name();
        }
      }
    } catch (const Error& e) {
      fill_failure(records, first, m, e.code_name());
    } catch (const std::exception&) {
      fill_failure(records, first, m, "error");
    }
  };

  Index pool = workers;
  if (pool <= 0) {
    unsigned hw = std::thread::hardware_concurrency();
    pool = hw == 0 ? 1 : static_cast<Index>(hw);
  }
  pool = std::min(pool, config.replicates);

  if (pool <= 1) {
    for (Index r = 0; r < config.replicates; ++r) run_replicate(r);
  } else {
    std::atomic<Index> next{0};
    auto worker = [&]() {
      for (;;) {
        Index r = next.fetch_add(1);
        if (r >= config.replicates) break;
        run_replicate(r);
      }
    };
    std::vector<std::thread> threads;
    threads.reserve(static_cast<std::size_t>(pool));
    for (Index t = 0; t < pool; ++t) threads.emplace_back(worker);
    for (std::thread& t : threads) t.join();
  }
  return records;
}

std::vector<AggregateRow> aggregate(
    const ExperimentConfig& config,
    const std::vector<ReplicateRecord>& records) {
  std::vector<AggregateRow> rows;
  rows.reserve(config.methods.size());
  for (const std::string& method : config.methods) {
    AggregateRow row;
    row.config = config;
    row.method = method;
    std::vector<double> rs;
    std::vector<double> c1s;
    std::vector<double> c2s;
    for (const ReplicateRecord& rec : records) {
      if (rec.method != method) continue;
      if (rec.status != "ok") {
        ++row.n_failed;
        continue;
      }
      ++row.n_ok;
      if (rec.trace_correlation) rs.push_back(*rec.trace_correlation);
      if (rec.cos1) c1s.push_back(*rec.cos1);
      if (rec.cos2) c2s.push_back(*rec.cos2);
    }
    Moments mr = moments_of(rs);
    row.mean_R = mr.mean;
    row.sd_R = mr.sd;
    Moments m1 = moments_of(c1s);
    row.mean_cos1 = m1.mean;
    row.sd_cos1 = m1.sd;
    Moments m2 = moments_of(c2s);
    row.mean_cos2 = m2.mean;
    row.sd_cos2 = m2.sd;
    rows.push_back(std::move(row));
  }
  return rows;
}

ExperimentResult run_and_aggregate(const ExperimentConfig& config,
                                   Index workers) {
  ExperimentResult result;
  result.config = config;
  result.records = run_experiment(config, workers);
  result.rows = aggregate(config, result.records);
  return result;
}

void write_replicate_csv(std::ostream& out,
                         const std::vector<ExperimentResult>& results) {
  out << timestamp_comment();
  out << "model,dist,nu,beta,n,p,k,method,rep,status,R,cos1,cos2\n";
  for (const ExperimentResult& res : results) {
    const ExperimentConfig& c = res.config;
    const std::string prefix =
        std::string(model_name(c.model_id)) + "," + dist_label(c.distribution) +
        "," + nu_field(c.distribution) + "," + beta_field(c.distribution) +
        "," + std::to_string(c.n) + "," + std::to_string(c.p) + "," +
        std::to_string(c.k) + ",";
    for (const ReplicateRecord& rec : res.records) {
      out << prefix << rec.method << "," << rec.replicate_index << ","
          << rec.status << "," << format_opt(rec.trace_correlation) << ","
          << format_opt(rec.cos1) << "," << format_opt(rec.cos2) << "\n";
    }
  }
}

void write_aggregate_csv(std::ostream& out,
                         const std::vector<ExperimentResult>& results) {
  out << timestamp_comment();
  out << "model,dist,nu,beta,n,p,k,method,n_ok,n_failed,mean_R,sd_R,"
         "mean_cos1,sd_cos1,mean_cos2,sd_cos2\n";
  for (const ExperimentResult& res : results) {
    const ExperimentConfig& c = res.config;
    const std::string prefix =
        std::string(model_name(c.model_id)) + "," + dist_label(c.distribution) +
        "," + nu_field(c.distribution) + "," + beta_field(c.distribution) +
        "," + std::to_string(c.n) + "," + std::to_string(c.p) + "," +
        std::to_string(c.k) + ",";
    for (const AggregateRow& row : res.rows) {
      out << prefix << row.method << "," << row.n_ok << "," << row.n_failed
          << "," << format_opt(row.mean_R) << "," << format_opt(row.sd_R)
          << "," << format_opt(row.mean_cos1) << "," << format_opt(row.sd_cos1)
          << "," << format_opt(row.mean_cos2) << "," << format_opt(row.sd_cos2)
          << "\n";
    }
  }
}

std::string markdown_table(const std::vector<AggregateRow>& rows) {
  std::ostringstream out;

  // Partition into blocks sharing (model, law, p, k, sigma_noise); the n
  // values become table rows and the methods become columns, as in the
  // reported simulation tables.
  std::vector<std::vector<const AggregateRow*>> blocks;
  std::string last_key;
  for (const AggregateRow& row : rows) {
    const ExperimentConfig& c = row.config;
    std::string key = std::string(model_name(c.model_id)) + "|" +
                      dist_display(c.distribution) + "|" + std::to_string(c.p) +
                      "|" + std::to_string(c.k) + "|" +
                      format_full(c.sigma_noise);
    if (blocks.empty() || key != last_key) {
      blocks.emplace_back();
      last_key = key;
    }
    blocks.back().push_back(&row);
  }

  auto cell = [](const std::optional<double>& mean,
                 const std::optional<double>& sd) {
    if (!mean) return std::string("-");
    std::string s = format_sig6(*mean);
    if (sd) s += " (" + format_sig6(*sd) + ")";
    return s;
  };

  bool first_block = true;
  for (const auto& block : blocks) {
    const ExperimentConfig& c = block.front()->config;
    if (!first_block) out << "\n";
    first_block = false;
    out << "**model " << model_name(c.model_id) << ", "
        << dist_display(c.distribution) << " predictors, p = " << c.p
        << ", k = " << c.k << ", sigma = " << format_sig6(c.sigma_noise)
        << "**\n\n";

    std::vector<std::string> methods;
    std::vector<Index> ns;
    for (const AggregateRow* row : block) {
      if (std::find(methods.begin(), methods.end(), row->method) ==
          methods.end())
        methods.push_back(row->method);
      if (std::find(ns.begin(), ns.end(), row->config.n) == ns.end())
        ns.push_back(row->config.n);
    }
    auto lookup = [&](Index n, const std::string& method) -> const AggregateRow* {
      for (const AggregateRow* row : block) {
        if (row->config.n == n && row->method == method) return row;
      }
      return nullptr;
    };
    bool any_cos = false;
    bool any_failed = false;
    for (const AggregateRow* row : block) {
      if (row->mean_cos1) any_cos = true;
      if (row->n_failed > 0) any_failed = true;
    }

    out << "| n | metric |";
    for (const std::string& method : methods) out << " " << method << " |";
    out << "\n| --- | --- |";
    for (std::size_t i = 0; i < methods.size(); ++i) out << " --- |";
    out << "\n";

    for (Index n : ns) {
      std::vector<std::string> metrics = {"R"};
      if (any_cos) {
        metrics.push_back("cos1");
        metrics.push_back("cos2");
      }
      if (any_failed) metrics.push_back("failures");
      for (const std::string& metric : metrics) {
        out << "| " << n << " | " << metric << " |";
        for (const std::string& method : methods) {
          const AggregateRow* row = lookup(n, method);
          std::string text = "-";
          if (row != nullptr) {
            if (metric == "R")
              text = cell(row->mean_R, row->sd_R);
            else if (metric == "cos1")
              text = cell(row->mean_cos1, row->sd_cos1);
            else if (metric == "cos2")
              text = cell(row->mean_cos2, row->sd_cos2);
            else
              text = std::to_string(row->n_failed) + "/" +
                     std::to_string(row->n_ok + row->n_failed);
          }
          out << " " << text << " |";
        }
        out << "\n";
      }
    }
  }
  return out.str();
}

std::vector<AggregateRow> grid(const std::vector<ExperimentConfig>& configs,
                               const std::string& replicate_csv_path,
                               const std::string& aggregate_csv_path,
                               Index workers) {
  std::vector<ExperimentResult> results;
  results.reserve(configs.size());
  for (const ExperimentConfig& config : configs)
    results.push_back(run_and_aggregate(config, workers));

  auto write_file = [](const std::string& path, auto&& writer) {
    std::ofstream out(path);
    if (!out) fail(ErrorCode::IoError, "cannot open '" + path + "' for writing");
    writer(out);
    out.flush();
    if (!out) fail(ErrorCode::IoError, "write to '" + path + "' failed");
  };
  if (!replicate_csv_path.empty())
    write_file(replicate_csv_path,
               [&](std::ostream& out) { write_replicate_csv(out, results); });
  if (!aggregate_csv_path.empty())
    write_file(aggregate_csv_path,
               [&](std::ostream& out) { write_aggregate_csv(out, results); });

  std::vector<AggregateRow> rows;
  for (ExperimentResult& res : results)
    for (AggregateRow& row : res.rows) rows.push_back(std::move(row));
  return rows;
}

}  // namespace psrfr
