#include <cstdint>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "psrfr/dataio.hpp"
#include "psrfr/distributions.hpp"
#include "psrfr/errors.hpp"
#include "psrfr/estimators.hpp"
#include "psrfr/models.hpp"
#include "psrfr/montecarlo.hpp"

namespace {

using namespace psrfr;

constexpr const char* kModelIds =
    "n1 n2 n3 n4 n5 nn1 nn2 nn3 nn4 ne1 ne2 ne3 gb4";
constexpr const char* kDistIds = "normal t cauchy pe mixture";
constexpr const char* kMethodIds = "psrfr ols phd sir save";
constexpr const char* kCovIds =
    "norm_p10 ellp_p10 norm_p30 norm_p40 ellp_p30 ellp_p40";

int usage_error(const std::string& message) {
  std::cerr << message << "\n";
  return 1;
}

std::vector<std::string> split_list(const std::string& text) {
  std::vector<std::string> items;
  std::string item;
  std::istringstream in(text);
  while (std::getline(in, item, ','))
    if (!item.empty()) items.push_back(item);
  return items;
}

bool known_method(const std::string& name) {
  for (const char* m : {"psrfr", "ols", "phd", "sir", "save"})
    if (name == m) return true;
  return false;
}

// Resolves the --dist/--nu/--beta trio. "cauchy" is t with nu pinned to 1.
bool resolve_dist(const std::string& name, double nu, double beta,
                  DistributionSpec& spec) {
  if (name == "normal") {
    spec.kind = DistKind::Normal;
  } else if (name == "t") {
    spec.kind = DistKind::StudentT;
    spec.nu = nu;
  } else if (name == "cauchy") {
    spec.kind = DistKind::StudentT;
    spec.nu = 1.0;
  } else if (name == "pe") {
    spec.kind = DistKind::PowerExponential;
    spec.beta = beta;
  } else if (name == "mixture") {
    spec.kind = DistKind::Mixture;
  } else {
    return false;
  }
  return true;
}

// Preset covariance keyed by (law family, dimension); identity for
// dimensions outside the preset grid.
Matrix default_covariance(DistKind kind, Index p) {
  const bool ellp =
      kind == DistKind::StudentT || kind == DistKind::PowerExponential;
  if (p == 10)
    return covariance_for(ellp ? CovScenario::EllpP10 : CovScenario::NormP10);
  if (p == 30)
    return covariance_for(ellp ? CovScenario::EllpP30 : CovScenario::NormP30);
  if (p == 40)
    return covariance_for(ellp ? CovScenario::EllpP40 : CovScenario::NormP40);
  return Matrix::Identity(p, p);
}

std::string format_sig6(double x) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.6g", x);
  return buf;
}

struct SimulateArgs {
  std::string model;
  std::string dist = "normal";
  double nu = 3.0;
  double beta = 1.0;
  Index n = 0;
  Index p = 10;
  Index k = 0;  // 0 means the model's true dimension
  double sigma = -1.0;  // negative means the model default
  std::string methods = "psrfr";
  Index slices = 10;
  Index reps = 100;
  std::uint64_t seed = 42;
  std::string out;
  std::string aggregate_out;
  Index workers = 0;
};

int run_simulate(const SimulateArgs& args) {
  auto model = parse_model(args.model);
  if (!model)
    return usage_error("unknown model '" + args.model +
                       "'; valid models: " + kModelIds);
  ExperimentConfig cfg;
  cfg.model_id = *model;
  if (!resolve_dist(args.dist, args.nu, args.beta, cfg.distribution))
    return usage_error("unknown dist '" + args.dist +
                       "'; valid dists: " + kDistIds);
  cfg.n = args.n;
  cfg.p = args.p;
  cfg.k = args.k > 0 ? args.k : true_k(*model);
  cfg.methods = split_list(args.methods);
  if (cfg.methods.empty())
    return usage_error("--methods needs at least one of: " +
                       std::string(kMethodIds));
  for (const std::string& m : cfg.methods)
    if (!known_method(m))
      return usage_error("unknown method '" + m +
                         "'; valid methods: " + kMethodIds);
  cfg.slices = args.slices;
  cfg.replicates = args.reps;
  cfg.base_seed = args.seed;
  cfg.distribution.sigma = default_covariance(cfg.distribution.kind, cfg.p);
  cfg.sigma_noise = args.sigma >= 0.0
                        ? args.sigma
                        : default_spec(*model, cfg.p).sigma_noise;

  std::vector<AggregateRow> rows =
      grid({cfg}, args.out, args.aggregate_out, args.workers);
  std::cout << markdown_table(rows);
  return 0;
}

struct FitArgs {
  std::string data;
  std::string response;
  Index k = 1;
  std::string method = "psrfr";
  std::string delimiter = ",";
};

int run_fit(const FitArgs& args) {
  if (!known_method(args.method))
    return usage_error("unknown method '" + args.method +
                       "'; valid methods: " + kMethodIds);
  if (args.delimiter.size() != 1)
    return usage_error("--delimiter must be a single character");

  Dataset ds = load_csv(args.data, args.response, args.delimiter[0]);
  SubspaceEstimate est;
  if (args.method == "psrfr")
    est = psrfr_fit(ds.predictors, ds.response, args.k);
  else if (args.method == "ols")
    est = ols_direction(ds.predictors, ds.response);
  else if (args.method == "phd")
    est = phd_fit(ds.predictors, ds.response, args.k);
  else if (args.method == "sir")
    est = sir_fit(ds.predictors, ds.response, args.k, 10);
  else
    est = save_fit(ds.predictors, ds.response, args.k, 10);

  std::cout << "method: " << est.method << "\n";
  std::cout << "basis (" << est.basis.rows() << " x " << est.basis.cols()
            << "), one row per variable:\n";
  for (Index i = 0; i < est.basis.rows(); ++i) {
    std::cout << "  " << ds.column_names[static_cast<std::size_t>(i)] << ":";
    for (Index j = 0; j < est.basis.cols(); ++j)
      std::cout << " " << format_sig6(est.basis(i, j));
    std::cout << "\n";
  }
  std::cout << "eigenvalues:";
  for (Index i = 0; i < est.eigenvalues.size(); ++i)
    std::cout << " " << format_sig6(est.eigenvalues[i]);
  std::cout << "\n";
  double total = est.eigenvalues.sum();
  std::cout << "proportions:";
  for (Index i = 0; i < est.eigenvalues.size(); ++i)
    std::cout << " " << format_sig6(total > 0.0 ? est.eigenvalues[i] / total
                                                : 0.0);
  std::cout << "\n";
  return 0;
}

struct AnalyzeArgs {
  std::string data;
  std::string response;
  std::string delimiter = ",";
  Index limit = -1;
  double threshold = 0.99;
};

int run_analyze(const AnalyzeArgs& args) {
  if (args.delimiter.size() != 1)
    return usage_error("--delimiter must be a single character");
  if (!(args.threshold > 0.0) || args.threshold > 1.0)
    return usage_error("--threshold must lie in (0, 1]");
  std::optional<Index> limit;
  if (args.limit >= 0) limit = args.limit;
  Dataset ds = load_csv(args.data, args.response, args.delimiter[0], limit);
  AnalysisReport report = analyze(ds, args.threshold);
  std::cout << report_text(report);
  std::cout << importance_table(report);
  return 0;
}

struct SampleArgs {
  std::string dist = "normal";
  double nu = 3.0;
  double beta = 1.0;
  Index n = 0;
  Index p = 10;
  std::string cov;
  std::string cov_diag;
  std::uint64_t seed = 42;
  std::string out;
};

int run_sample(const SampleArgs& args) {
  DistributionSpec spec;
  if (!resolve_dist(args.dist, args.nu, args.beta, spec))
    return usage_error("unknown dist '" + args.dist +
                       "'; valid dists: " + kDistIds);
  spec.mu = Vector::Zero(args.p);
  if (!args.cov_diag.empty()) {
    std::vector<std::string> parts = split_list(args.cov_diag);
    if (static_cast<Index>(parts.size()) != args.p)
      return usage_error("--cov-diag needs exactly p = " +
                         std::to_string(args.p) + " entries");
    Vector diag(args.p);
    for (Index i = 0; i < args.p; ++i) {
      try {
        diag[i] = std::stod(parts[static_cast<std::size_t>(i)]);
      } catch (const std::exception&) {
        return usage_error("--cov-diag entry '" +
                           parts[static_cast<std::size_t>(i)] +
                           "' is not a number");
      }
    }
    spec.sigma = diag.asDiagonal();
  } else if (!args.cov.empty()) {
    auto scenario = parse_scenario(args.cov);
    if (!scenario)
      return usage_error("unknown cov preset '" + args.cov +
                         "'; valid presets: " + kCovIds);
    Matrix sigma = covariance_for(*scenario);
    if (sigma.rows() != args.p)
      return usage_error("--cov " + args.cov + " requires --p " +
                         std::to_string(sigma.rows()));
    spec.sigma = std::move(sigma);
  } else {
    spec.sigma = default_covariance(spec.kind, args.p);
  }

  DataMatrix draws = sample(spec, args.n, SeededStream{args.seed, 0});
  std::ofstream file;
  std::ostream* out = &std::cout;
  if (!args.out.empty()) {
    file.open(args.out);
    if (!file) fail(ErrorCode::IoError, "cannot open '" + args.out + "'");
    out = &file;
  }
  for (Index j = 0; j < args.p; ++j)
    *out << (j == 0 ? "" : ",") << "x" << (j + 1);
  *out << "\n";
  out->precision(17);
  for (Index i = 0; i < draws.n(); ++i) {
    for (Index j = 0; j < args.p; ++j)
      *out << (j == 0 ? "" : ",") << draws.values(i, j);
    *out << "\n";
  }
  if (!*out) fail(ErrorCode::IoError, "write to '" + args.out + "' failed");
  return 0;
}

struct QqArgs {
  std::string data;
  std::string response;
  std::string delimiter = ",";
  Index limit = -1;
  bool standardize_first = false;
  std::string out_dir = ".";
};

int run_qq(const QqArgs& args) {
  if (args.delimiter.size() != 1)
    return usage_error("--delimiter must be a single character");
  std::optional<Index> limit;
  if (args.limit >= 0) limit = args.limit;
  Dataset ds = load_csv(args.data, args.response, args.delimiter[0], limit);
  if (args.standardize_first) ds = standardize(ds);
  for (const std::string& path : write_qq_csvs(ds, args.out_dir))
    std::cout << path << "\n";
  return 0;
}

struct TablesArgs {
  std::string preset;
  Index reps = 1000;
  std::uint64_t seed = 42;
  std::string out;
  std::string aggregate_out;
  Index workers = 0;
};

std::vector<ExperimentConfig> preset_configs(const std::string& preset,
                                             Index reps, std::uint64_t seed) {
  const std::vector<Index> ns = {100, 300, 500};
  const std::vector<std::string> all_methods = {"psrfr", "phd", "sir", "save"};

  auto law = [](DistKind kind, Index p, double nu, double beta) {
    DistributionSpec spec;
    spec.kind = kind;
    spec.nu = nu;
    spec.beta = beta;
    spec.mu = Vector::Zero(p);
    spec.sigma = default_covariance(kind, p);
    return spec;
  };
  std::vector<ExperimentConfig> configs;
  auto push = [&](ModelId model, DistributionSpec dist, Index n, Index p,
                  std::vector<std::string> methods,
                  std::optional<double> sigma = std::nullopt) {
    ExperimentConfig cfg;
    cfg.model_id = model;
    cfg.distribution = std::move(dist);
    cfg.n = n;
    cfg.p = p;
    cfg.k = true_k(model);
    cfg.methods = std::move(methods);
    cfg.replicates = reps;
    cfg.base_seed = seed;
    cfg.sigma_noise =
        sigma ? *sigma : default_spec(model, p).sigma_noise;
    configs.push_back(std::move(cfg));
  };

  if (preset == "table1") {
    for (ModelId model : {ModelId::N1, ModelId::N2})
      for (Index n : ns)
        push(model, law(DistKind::Normal, 10, 3, 1), n, 10, {"psrfr", "phd"});
  } else if (preset == "table2") {
    for (ModelId model : {ModelId::N3, ModelId::N4, ModelId::N5})
      for (Index n : ns)
        push(model, law(DistKind::Normal, 10, 3, 1), n, 10, all_methods);
  } else if (preset == "table3" || preset == "table4" || preset == "table5" ||
             preset == "table6") {
    ModelId model = ModelId::NN1;
    if (preset == "table4") model = ModelId::NN2;
    if (preset == "table5") model = ModelId::NN3;
    if (preset == "table6") model = ModelId::NN4;
    const std::vector<DistributionSpec> laws = {
        law(DistKind::StudentT, 10, 3, 1), law(DistKind::StudentT, 10, 2, 1),
        law(DistKind::StudentT, 10, 1, 1),
        law(DistKind::PowerExponential, 10, 3, 0.5),
        law(DistKind::PowerExponential, 10, 3, 5)};
    for (const DistributionSpec& dist : laws)
      for (Index n : ns) push(model, dist, n, 10, all_methods);
  } else if (preset == "table7") {
    for (Index p : {Index{30}, Index{40}})
      for (Index n : ns)
        push(ModelId::N4, law(DistKind::Normal, p, 3, 1), n, p,
             {"psrfr", "sir"});
    for (Index p : {Index{30}, Index{40}})
      for (Index n : ns)
        push(ModelId::NN3, law(DistKind::StudentT, p, 1, 1), n, p,
             {"psrfr", "sir"});
  } else if (preset == "table9") {
    for (double sigma : {2.0, 4.0})
      for (Index n : ns)
        push(ModelId::GB4, law(DistKind::Normal, 10, 3, 1), n, 10,
             all_methods, sigma);
  } else {
    return {};
  }
  return configs;
}

int run_tables(const TablesArgs& args) {
  std::vector<ExperimentConfig> configs =
      preset_configs(args.preset, args.reps, args.seed);
  if (configs.empty())
    return usage_error("unknown preset '" + args.preset +
                       "'; valid presets: table1 table2 table3 table4 "
                       "table5 table6 table7 table9");
  std::vector<AggregateRow> rows =
      grid(configs, args.out, args.aggregate_out, args.workers);
  std::cout << markdown_table(rows);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{
      "Sufficient dimension reduction via principal square response forward "
      "regression, with SIR, SAVE, PHD and OLS baselines"};
  app.require_subcommand(1);

  SimulateArgs sim;
  CLI::App* simulate = app.add_subcommand(
      "simulate", "Run one simulation config and print the aggregate table");
  simulate->add_option("--model", sim.model,
                       std::string("model id, one of: ") + kModelIds)
      ->required();
  simulate->add_option("--dist", sim.dist,
                       std::string("predictor law, one of: ") + kDistIds);
  simulate->add_option("--nu", sim.nu, "t degrees of freedom (dist = t)");
  simulate->add_option("--beta", sim.beta, "pe shape (dist = pe)");
  simulate->add_option("--n", sim.n, "sample size per replicate")
      ->required()
      ->check(CLI::PositiveNumber);
  simulate->add_option("--p", sim.p, "predictor dimension")
      ->check(CLI::PositiveNumber);
  simulate->add_option("--k", sim.k,
                       "fitted dimension (default: the model's true k)")
      ->check(CLI::PositiveNumber);
  simulate->add_option("--sigma", sim.sigma,
                       "noise sigma (default: the model's canonical value)");
  simulate->add_option("--methods", sim.methods,
                       std::string("comma list of: ") + kMethodIds);
  simulate->add_option("--slices", sim.slices, "sir/save slice count")
      ->check(CLI::PositiveNumber);
  simulate->add_option("--reps", sim.reps, "replicate count")
      ->check(CLI::PositiveNumber);
  simulate->add_option("--seed", sim.seed, "base seed");
  simulate->add_option("--out", sim.out, "replicate CSV path");
  simulate->add_option("--aggregate-out", sim.aggregate_out,
                       "aggregate CSV path");
  simulate->add_option("--workers", sim.workers,
                       "worker threads (0 = all cores)");

  FitArgs fit;
  CLI::App* fit_cmd =
      app.add_subcommand("fit", "Fit one method to a CSV dataset");
  fit_cmd->add_option("--data", fit.data, "CSV path")->required();
  fit_cmd->add_option("--response", fit.response, "response column name")
      ->required();
  fit_cmd->add_option("--k", fit.k, "fitted dimension")
      ->check(CLI::PositiveNumber);
  fit_cmd->add_option("--method", fit.method,
                      std::string("one of: ") + kMethodIds);
  fit_cmd->add_option("--delimiter", fit.delimiter, "field delimiter");

  AnalyzeArgs ana;
  CLI::App* analyze_cmd = app.add_subcommand(
      "analyze", "Rotated-coordinates dimension and importance report");
  analyze_cmd->add_option("--data", ana.data, "CSV path")->required();
  analyze_cmd->add_option("--response", ana.response, "response column name")
      ->required();
  analyze_cmd->add_option("--delimiter", ana.delimiter, "field delimiter");
  analyze_cmd->add_option("--limit", ana.limit, "keep only the first N rows");
  analyze_cmd->add_option("--threshold", ana.threshold,
                          "cumulative eigenvalue proportion target");

  SampleArgs smp;
  CLI::App* sample_cmd =
      app.add_subcommand("sample", "Draw predictors and write a CSV");
  sample_cmd->add_option("--dist", smp.dist,
                         std::string("predictor law, one of: ") + kDistIds);
  sample_cmd->add_option("--nu", smp.nu, "t degrees of freedom (dist = t)");
  sample_cmd->add_option("--beta", smp.beta, "pe shape (dist = pe)");
  sample_cmd->add_option("--n", smp.n, "number of rows")
      ->required()
      ->check(CLI::PositiveNumber);
  sample_cmd->add_option("--p", smp.p, "dimension")
      ->check(CLI::PositiveNumber);
  sample_cmd->add_option("--cov", smp.cov,
                         std::string("covariance preset, one of: ") + kCovIds);
  sample_cmd->add_option("--cov-diag", smp.cov_diag,
                         "explicit comma-separated diagonal");
  sample_cmd->add_option("--seed", smp.seed, "base seed");
  sample_cmd->add_option("--out", smp.out, "output CSV path (default stdout)");

  QqArgs qq;
  CLI::App* qq_cmd = app.add_subcommand(
      "qq", "Write normal quantile-quantile CSVs, one per predictor");
  qq_cmd->add_option("--data", qq.data, "CSV path")->required();
  qq_cmd->add_option("--response", qq.response, "response column name")
      ->required();
  qq_cmd->add_option("--delimiter", qq.delimiter, "field delimiter");
  qq_cmd->add_option("--limit", qq.limit, "keep only the first N rows");
  qq_cmd->add_flag("--standardize", qq.standardize_first,
                   "standardize predictors before emitting");
  qq_cmd->add_option("--out-dir", qq.out_dir, "output directory");

  TablesArgs tab;
  CLI::App* tables_cmd = app.add_subcommand(
      "tables", "Run a bundled simulation grid preset");
  tables_cmd
      ->add_option("--preset", tab.preset,
                   "one of: table1 table2 table3 table4 table5 table6 "
                   "table7 table9")
      ->required();
  tables_cmd->add_option("--reps", tab.reps, "replicates per config")
      ->check(CLI::PositiveNumber);
  tables_cmd->add_option("--seed", tab.seed, "base seed");
  tables_cmd->add_option("--out", tab.out, "replicate CSV path");
  tables_cmd->add_option("--aggregate-out", tab.aggregate_out,
                         "aggregate CSV path");
  tables_cmd->add_option("--workers", tab.workers,
                         "worker threads (0 = all cores)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }

  try {
    if (simulate->parsed()) return run_simulate(sim);
    if (fit_cmd->parsed()) return run_fit(fit);
    if (analyze_cmd->parsed()) return run_analyze(ana);
    if (sample_cmd->parsed()) return run_sample(smp);
    if (qq_cmd->parsed()) return run_qq(qq);
    if (tables_cmd->parsed()) return run_tables(tab);
  } catch (const Error& e) {
    std::cerr << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << e.what() << "\n";
    return 2;
  }
  return usage_error("no subcommand given");
}
