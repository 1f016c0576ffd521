// Command-line front end: run experiments, fit models, flag outliers, and
// emit plot-ready CSV/JSON artifacts. Every artifact embeds the parameters,
// seed, and tool version that produced it.

#include <CLI11.hpp>
#include <cstdint>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <set>
#include <string>
#include <vector>

#include <typicality/typicality.hpp>

namespace fs = std::filesystem;
using typicality::Json;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitUsage = 2;
constexpr int kExitInput = 3;
constexpr int kExitNumerical = 4;
constexpr int kExitInternal = 5;

struct GlobalOptions {
  std::string output_dir;
  std::uint64_t seed = 42;
  std::string delimiter = ",";
  std::vector<std::string> extra_missing_tokens;
};

char delimiter_char(const GlobalOptions& global) {
  if (global.delimiter.size() != 1) {
    throw CLI::ValidationError("--delimiter", "must be a single character");
  }
  return global.delimiter[0];
}

std::set<std::string> missing_tokens(const GlobalOptions& global) {
  std::set<std::string> tokens = typicality::default_missing_tokens();
  tokens.insert(global.extra_missing_tokens.begin(),
                global.extra_missing_tokens.end());
  return tokens;
}

void report_written(const std::vector<fs::path>& paths) {
  for (const fs::path& p : paths) {
    std::cout << "wrote " << p.string() << '\n';
  }
}

void write_and_announce(const typicality::ExperimentReport& report,
                        const GlobalOptions& global) {
  report_written(typicality::write_report(report, global.output_dir));
}

typicality::EndpointMap load_endpoint_map(const std::string& path) {
  std::ifstream in(path);
  if (!in) {
    throw typicality::IoError("cannot open endpoint map '" + path + "'");
  }
  Json j;
  try {
    in >> j;
  } catch (const Json::parse_error& e) {
    throw typicality::IoError("endpoint map '" + path + "': " + e.what());
  }
  typicality::EndpointMap map;
  for (const auto& [column, entries] : j.items()) {
    for (const auto& [token, value] : entries.items()) {
      if (!value.is_number_integer()) {
        throw typicality::IoError("endpoint map '" + path + "': value for '" +
                                  token + "' must be an integer");
      }
      map[column][token] = value.get<int>();
    }
  }
  return map;
}

// ---- simulate ----

struct SimulateOptions {
  std::string experiment;
  Eigen::Index d = 0;        // 0 = per-experiment default
  Eigen::Index n = 0;
  Eigen::Index d_max = 100;
  Eigen::Index n_per_d = 200;
  double band = 0.3;
  std::vector<double> epsilons;
};

int run_simulate(const GlobalOptions& global, const SimulateOptions& opt) {
  using namespace typicality;
  ExperimentReport report;
  if (opt.experiment == "norm-growth") {
    report = norm_growth_experiment(opt.d_max, opt.n_per_d, global.seed);
  } else if (opt.experiment == "radii") {
    report = radii_distribution_experiment(opt.d ? opt.d : 100,
                                           opt.n ? opt.n : 100000, global.seed);
  } else if (opt.experiment == "coverage") {
    std::vector<double> epsilons = opt.epsilons;
    if (epsilons.empty()) {
      epsilons = {0.25, 0.5, 1.0, 2.0, 4.0, 8.0, 16.0, 32.0};
    }
    report = typical_set_coverage_experiment(
        opt.d ? opt.d : 20, opt.n ? opt.n : 100000, epsilons, global.seed);
  } else if (opt.experiment == "within-band") {
    report = within_band_of_mean_experiment(opt.d ? opt.d : 10,
                                            opt.n ? opt.n : 4063, opt.band,
                                            global.seed);
  } else if (opt.experiment == "planted-2d") {
    report = planted_outlier_experiment_2d(global.seed);
  } else if (opt.experiment == "planted-highdim") {
    report = planted_outlier_experiment_highdim(global.seed);
  } else {
    throw CLI::ValidationError(
        "experiment",
        "unknown experiment '" + opt.experiment +
            "' (expected norm-growth, radii, coverage, within-band, "
            "planted-2d, or planted-highdim)");
  }
  write_and_announce(report, global);
  return kExitOk;
}

// ---- geometry ----

int run_geometry(const GlobalOptions& global, Eigen::Index max_d) {
  using namespace typicality;
  ExperimentReport report;
  report.name = "geometry";
  report.params = {{"max_d", max_d}, {"seed", global.seed}};

  std::vector<double> dims, sphere, cube, ratio, log2_ratio, exact, asym;
  for (const VolumeCurvePoint& p : volume_curve(max_d)) {
    dims.push_back(static_cast<double>(p.dimension));
    sphere.push_back(p.sphere_volume);
    cube.push_back(p.cube_volume);
    ratio.push_back(p.ratio);
    log2_ratio.push_back(p.log2_ratio);
    const ExpectedNorm norm = expected_norm(p.dimension);
    exact.push_back(norm.exact);
    asym.push_back(norm.asymptotic);
  }
  Series volumes{"volume_curve", {}};
  volumes.add_column("dimension", dims);
  volumes.add_column("sphere_volume", std::move(sphere));
  volumes.add_column("cube_volume", std::move(cube));
  volumes.add_column("cube_sphere_ratio", std::move(ratio));
  volumes.add_column("log2_cube_sphere_ratio", std::move(log2_ratio));
  report.series.push_back(std::move(volumes));

  Series norms{"expected_norm", {}};
  norms.add_column("dimension", std::move(dims));
  norms.add_column("exact", std::move(exact));
  norms.add_column("sqrt_d", std::move(asym));
  report.series.push_back(std::move(norms));

  report.summary["cube_sphere_ratio_at_max_d"] = cube_sphere_ratio(max_d);
  report.summary["log2_cube_sphere_ratio_at_max_d"] =
      log_cube_sphere_ratio(max_d) * std::numbers::log2e;
  write_and_announce(report, global);
  return kExitOk;
}

// ---- detect / compare ----

struct DetectOptions {
  std::string input;
  std::string estimator = "mcd";
  double cutoff_sd = typicality::kDefaultMahalanobisCutoff;
  double epsilon_bits = typicality::kDefaultEpsilonBits;
  double h_fraction = 0.0;  // 0 = maximal-breakdown default
  int n_starts = typicality::kDefaultMcdStarts;
};

typicality::GaussianModel fit_for_cli(const typicality::DataMatrix& data,
                                      const DetectOptions& opt,
                                      std::uint64_t seed) {
  using namespace typicality;
  FitOptions fit;
  fit.seed = seed;
  fit.mcd_starts = opt.n_starts;
  if (opt.h_fraction > 0.0) {
    const auto n = data.rows();
    const auto d = data.cols();
    const auto h = static_cast<Eigen::Index>(opt.h_fraction * static_cast<double>(n));
    fit.mcd_h = std::clamp<Eigen::Index>(h, d + 1, n);
  }
  return fit_gaussian(
      data, opt.estimator == "sample" ? Estimator::Sample : Estimator::Mcd,
      fit);
}

int run_detect_or_compare(const GlobalOptions& global, const DetectOptions& opt,
                          bool compare_mode) {
  using namespace typicality;
  DataMatrix data =
      load_table(opt.input, missing_tokens(global), delimiter_char(global));
  require_complete(data, compare_mode ? "compare" : "detect");
  const GaussianModel model = fit_for_cli(data, opt, global.seed);
  const ComparisonResult cmp =
      compare_methods(data.values, model, opt.cutoff_sd, opt.epsilon_bits);

  ExperimentReport report;
  report.name = compare_mode ? "compare" : "detect";
  report.params = {{"input", opt.input},
                   {"estimator", opt.estimator},
                   {"cutoff_sd", opt.cutoff_sd},
                   {"epsilon_bits", opt.epsilon_bits},
                   {"h_fraction", opt.h_fraction},
                   {"n_starts", opt.n_starts},
                   {"seed", global.seed}};

  std::vector<double> idx, dist, dens, mflag, tflag, cat;
  for (const OutlierVerdict& v : cmp.verdicts) {
    idx.push_back(static_cast<double>(v.index));
    dist.push_back(v.mahalanobis_sd);
    dens.push_back(v.log2_density);
    mflag.push_back(v.mahalanobis_outlier ? 1.0 : 0.0);
    tflag.push_back(v.typicality_outlier ? 1.0 : 0.0);
    cat.push_back(v.category == Category::Inlier          ? 0.0
                  : v.category == Category::Both          ? 1.0
                  : v.category == Category::MahalanobisOnly ? 2.0
                                                            : 3.0);
  }
  Series verdicts{"verdicts", {}};
  verdicts.add_column("index", std::move(idx));
  verdicts.add_column("mahalanobis_sd", std::move(dist));
  verdicts.add_column("log2_density", std::move(dens));
  verdicts.add_column("mahalanobis_outlier", std::move(mflag));
  verdicts.add_column("typicality_outlier", std::move(tflag));
  verdicts.add_column("category_code", std::move(cat));
  report.series.push_back(std::move(verdicts));

  report.summary["n_rows"] = data.rows();
  report.summary["n_cols"] = data.cols();
  report.summary["count_inlier"] = cmp.counts.inlier;
  report.summary["count_both"] = cmp.counts.both;
  report.summary["count_mahalanobis_only"] = cmp.counts.mahalanobis_only;
  report.summary["count_typicality_only"] = cmp.counts.typicality_only;
  report.summary["entropy_bits"] = model.entropy_bits;
  report.summary["band_lower_log2_density"] = cmp.band.lower;
  report.summary["band_upper_log2_density"] = cmp.band.upper;
  report.summary["model_regularized"] = model.regularized;
  report.summary["category_code_legend"] =
      "0=inlier 1=both 2=mahalanobis_only 3=typicality_only";
  write_and_announce(report, global);
  return kExitOk;
}

// ---- analyze ----

struct AnalyzeOptions {
  std::string input;
  std::string endpoint_map_path;
  std::vector<Eigen::Index> d_list;
  int n_reps = 100;
};

int run_analyze(const GlobalOptions& global, const AnalyzeOptions& opt) {
  using namespace typicality;
  const char delim = delimiter_char(global);
  DataMatrix raw = load_table(opt.input, missing_tokens(global), delim);

  EndpointMap endpoint_map;
  if (!opt.endpoint_map_path.empty()) {
    endpoint_map = load_endpoint_map(opt.endpoint_map_path);
  }
  auto [cleaned, cleaning] = clean_likert(raw, endpoint_map);
  auto [imputed, rates] = mean_impute(cleaned);
  cleaning.imputation_rate_per_column = rates;
  double total = 0.0;
  for (double r : rates) total += r;
  cleaning.imputation_rate_overall =
      rates.empty() ? 0.0 : total / static_cast<double>(rates.size());
  const DataMatrix standardized = standardize(imputed);

  const fs::path dir(global.output_dir);
  std::error_code ec;
  fs::create_directories(dir, ec);
  std::vector<fs::path> written;

  Json cleaning_json;
  cleaning_json["name"] = "analyze_cleaning";
  cleaning_json["version"] = kVersion;
  cleaning_json["params"] = {{"input", opt.input},
                             {"endpoint_map", opt.endpoint_map_path},
                             {"seed", global.seed}};
  cleaning_json["cleaning"] = to_json(cleaning);
  const fs::path cleaning_path = dir / "analyze_cleaning.json";
  {
    std::ofstream out(cleaning_path);
    if (!out) throw IoError("cannot write '" + cleaning_path.string() + "'");
    out << cleaning_json.dump(2) << '\n';
  }
  written.push_back(cleaning_path);

  const fs::path cleaned_path = dir / "analyze_cleaned.csv";
  write_table(standardized, cleaned_path, delim);
  written.push_back(cleaned_path);

  DataMatrix corr;
  corr.values = correlation_matrix(standardized);
  corr.column_labels = standardized.column_labels;
  corr.missing_mask = BoolMask::Constant(corr.values.rows(), corr.values.cols(), false);
  const fs::path corr_path = dir / "analyze_correlations.csv";
  write_table(corr, corr_path, delim);
  written.push_back(corr_path);

  std::vector<Eigen::Index> d_list = opt.d_list;
  if (d_list.empty()) {
    for (Eigen::Index d = std::min<Eigen::Index>(3, standardized.cols());
         d <= standardized.cols(); ++d) {
      d_list.push_back(d);
    }
  }
  ExperimentReport subset =
      subset_norm_experiment(standardized, d_list, opt.n_reps, global.seed);
  subset.params["input"] = opt.input;
  report_written(write_report(subset, dir));
  report_written(written);
  return kExitOk;
}

// ---- synth ----

struct SynthOptions {
  Eigen::Index n = 6811;
  Eigen::Index d = 58;
  int levels = 7;
  double correlation = 0.2;
  double missing_rate = 0.079;
  std::string out_name = "synth.csv";
};

int run_synth(const GlobalOptions& global, const SynthOptions& opt) {
  using namespace typicality;
  DataMatrix data = synth_likert(opt.n, opt.d, opt.levels, opt.correlation,
                                 opt.missing_rate, global.seed);
  const fs::path dir(global.output_dir);
  std::error_code ec;
  fs::create_directories(dir, ec);
  const fs::path out_path = dir / opt.out_name;

  // Comment header so the table carries its own provenance; load_table skips
  // '#' lines.
  const std::vector<std::string> comments = {
      "name=synth",
      std::string("version=") + kVersion,
      "n=" + std::to_string(opt.n),
      "d=" + std::to_string(opt.d),
      "levels=" + std::to_string(opt.levels),
      "correlation=" + detail::format_double(opt.correlation),
      "missing_rate=" + detail::format_double(opt.missing_rate),
      "seed=" + std::to_string(global.seed)};
  write_table(data, out_path, delimiter_char(global), comments);
  report_written({out_path});
  return kExitOk;
}

Json error_json(const std::string& kind, const std::string& message,
                int exit_code) {
  Json j;
  j["error"] = kind;
  j["message"] = message;
  j["exit_code"] = exit_code;
  return j;
}

void try_write_error(const GlobalOptions& global, const Json& j) {
  std::error_code ec;
  fs::create_directories(global.output_dir, ec);
  if (ec) return;
  std::ofstream out(fs::path(global.output_dir) / "error.json");
  if (out) out << j.dump(2) << '\n';
}

}  // namespace

int main(int argc, char** argv) {
  GlobalOptions global;
  const char* env_dir = std::getenv("TYPICALITY_OUTPUT_DIR");
  global.output_dir = env_dir ? env_dir : ".";

  CLI::App app{"Typicality-based multivariate outlier detection toolkit"};
  app.require_subcommand(1);
  app.add_option("--output-dir", global.output_dir,
                 "Directory for artifacts (default: $TYPICALITY_OUTPUT_DIR or .)");
  app.add_option("--seed", global.seed, "Master RNG seed (embedded in artifacts)")
      ->capture_default_str();
  app.add_option("--delimiter", global.delimiter, "Field delimiter for tables")
      ->capture_default_str();
  app.add_option("--missing-token", global.extra_missing_tokens,
                 "Extra cell value to treat as missing (repeatable; '' and "
                 "'NA' always count)");

  SimulateOptions sim;
  CLI::App* simulate = app.add_subcommand(
      "simulate", "Run a named experiment and write its report");
  simulate
      ->add_option("experiment", sim.experiment,
                   "norm-growth | radii | coverage | within-band | planted-2d "
                   "| planted-highdim")
      ->required();
  simulate->add_option("--d", sim.d, "Dimension (radii, coverage, within-band)");
  simulate->add_option("--n", sim.n, "Draw count (radii, coverage, within-band)");
  simulate->add_option("--d-max", sim.d_max, "Largest dimension (norm-growth)")
      ->capture_default_str();
  simulate->add_option("--n-per-d", sim.n_per_d, "Draws per dimension (norm-growth)")
      ->capture_default_str();
  simulate->add_option("--band", sim.band, "Half-width in SD units (within-band)")
      ->capture_default_str();
  simulate->add_option("--epsilons", sim.epsilons, "Epsilon list in bits (coverage)")
      ->delimiter(',');

  Eigen::Index geometry_max_d = 20;
  CLI::App* geometry = app.add_subcommand(
      "geometry", "Tabulate cube/sphere volumes and expected norms");
  geometry->add_option("--max-d", geometry_max_d, "Largest dimension")
      ->capture_default_str();

  DetectOptions detect_opt;
  CLI::App* detect = app.add_subcommand(
      "detect", "Fit a model to a table and write per-row outlier verdicts");
  CLI::App* compare = app.add_subcommand(
      "compare", "Write the distance-versus-typicality category table for a table");
  for (CLI::App* cmd : {detect, compare}) {
    cmd->add_option("--input", detect_opt.input, "Input table (delimited text)")
        ->required();
    cmd->add_option("--estimator", detect_opt.estimator, "sample | mcd")
        ->check(CLI::IsMember({"sample", "mcd"}))
        ->capture_default_str();
    cmd->add_option("--c", detect_opt.cutoff_sd, "Distance cutoff in SD units")
        ->capture_default_str();
    cmd->add_option("--epsilon", detect_opt.epsilon_bits,
                    "Typicality half-width in bits")
        ->capture_default_str();
    cmd->add_option("--h-fraction", detect_opt.h_fraction,
                    "Subset fraction for the robust fit (0 = maximal breakdown)")
        ->capture_default_str();
    cmd->add_option("--n-starts", detect_opt.n_starts,
                    "Random starts for the robust fit")
        ->capture_default_str();
  }

  AnalyzeOptions analyze_opt;
  CLI::App* analyze = app.add_subcommand(
      "analyze",
      "Clean, impute, standardize, correlate, and run the subset-norm experiment");
  analyze->add_option("--input", analyze_opt.input, "Input table")->required();
  analyze->add_option("--endpoint-map", analyze_opt.endpoint_map_path,
                      "JSON file mapping text tokens to integers, per column "
                      "('*' = every column)");
  analyze->add_option("--d-list", analyze_opt.d_list,
                      "Subset sizes (default: 3 up to the kept column count)")
      ->delimiter(',');
  analyze->add_option("--n-reps", analyze_opt.n_reps,
                      "Random subsets per size")
      ->capture_default_str();

  SynthOptions synth_opt;
  CLI::App* synth = app.add_subcommand(
      "synth", "Write a synthetic Likert-style table with injected missingness");
  synth->add_option("--n", synth_opt.n, "Rows")->capture_default_str();
  synth->add_option("--d", synth_opt.d, "Columns")->capture_default_str();
  synth->add_option("--levels", synth_opt.levels, "Response levels")
      ->capture_default_str();
  synth->add_option("--correlation", synth_opt.correlation,
                    "Equicorrelation of the latent Gaussian")
      ->capture_default_str();
  synth->add_option("--missing-rate", synth_opt.missing_rate,
                    "Fraction of cells masked")
      ->capture_default_str();
  synth->add_option("--out", synth_opt.out_name, "Output file name")
      ->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (simulate->parsed()) return run_simulate(global, sim);
    if (geometry->parsed()) return run_geometry(global, geometry_max_d);
    if (detect->parsed()) return run_detect_or_compare(global, detect_opt, false);
    if (compare->parsed()) return run_detect_or_compare(global, detect_opt, true);
    if (analyze->parsed()) return run_analyze(global, analyze_opt);
    if (synth->parsed()) return run_synth(global, synth_opt);
    std::cerr << "error: no command\n";
    return kExitUsage;
  } catch (const CLI::Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    try_write_error(global, error_json("usage", e.what(), kExitUsage));
    return kExitUsage;
  } catch (const typicality::SingularMatrixError& e) {
    std::cerr << "numerical error: " << e.what() << '\n';
    Json j = error_json("singular_matrix", e.what(), kExitNumerical);
    j["pivot"] = e.pivot();
    try_write_error(global, j);
    return kExitNumerical;
  } catch (const typicality::ParseError& e) {
    std::cerr << "input error: " << e.what() << '\n';
    Json j = error_json("parse", e.what(), kExitInput);
    j["line"] = e.line();
    try_write_error(global, j);
    return kExitInput;
  } catch (const typicality::PipelineError& e) {
    std::cerr << "input error: " << e.what() << '\n';
    Json j = error_json("pipeline", e.what(), kExitInput);
    j["column"] = e.column();
    try_write_error(global, j);
    return kExitInput;
  } catch (const typicality::IoError& e) {
    std::cerr << "input error: " << e.what() << '\n';
    try_write_error(global, error_json("io", e.what(), kExitInput));
    return kExitInput;
  } catch (const std::domain_error& e) {
    std::cerr << "input error: " << e.what() << '\n';
    try_write_error(global, error_json("domain", e.what(), kExitInput));
    return kExitInput;
  } catch (const std::invalid_argument& e) {
    std::cerr << "input error: " << e.what() << '\n';
    try_write_error(global, error_json("invalid_argument", e.what(), kExitInput));
    return kExitInput;
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << '\n';
    try_write_error(global, error_json("internal", e.what(), kExitInternal));
    return kExitInternal;
  }
}
