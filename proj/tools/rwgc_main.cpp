#include <CLI11.hpp>

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "rwgc/config_json.hpp"
#include "rwgc/errorbound.hpp"
#include "rwgc/io.hpp"
#include "rwgc/metrics.hpp"
#include "rwgc/parallel.hpp"
#include "rwgc/report.hpp"
#include "rwgc/rwg.hpp"
#include "rwgc/stats.hpp"
#include "rwgc/svg.hpp"

namespace fs = std::filesystem;
using namespace rwgc;

namespace {

constexpr int exit_ok = 0;
constexpr int exit_usage = 1;
constexpr int exit_runtime = 2;

std::vector<double> parse_double_list(const std::string& csv, const char* what) {
  std::vector<double> values;
  std::size_t start = 0;
  while (start <= csv.size()) {
    const auto comma = csv.find(',', start);
    const std::string field =
        csv.substr(start, comma == std::string::npos ? std::string::npos : comma - start);
    if (!field.empty()) values.push_back(parse_double(field));
    if (comma == std::string::npos) break;
    start = comma + 1;
  }
  if (values.empty())
    throw std::invalid_argument(std::string(what) + ": expected comma-separated numbers");
  return values;
}

struct GlobalArgs {
  std::string config;
  std::optional<std::uint64_t> seed;
  int threads = 0;
  std::string out;
};

void apply_threads(const GlobalArgs& args) {
  // RWGC_THREADS wins over --threads when set.
  if (const char* env = std::getenv("RWGC_THREADS")) {
    set_default_threads(std::max(0, std::atoi(env)));
    return;
  }
  set_default_threads(args.threads);
}

ExperimentConfig load_config(const GlobalArgs& args, const std::string& profile) {
  if (args.config.empty()) throw std::invalid_argument("--config is required");
  if (!fs::exists(args.config))
    throw std::invalid_argument("config file not found: " + args.config);
  return experiment_config_from_json(read_text_file(args.config), profile, args.seed);
}

int cmd_suite(const GlobalArgs& args, const std::string& profile, bool parallel_tasks) {
  const ExperimentConfig config = load_config(args, profile);
  SuiteOptions options;
  options.profile = profile;
  options.parallel_tasks = parallel_tasks;
  options.log = &std::cerr;
  const fs::path out = args.out.empty() ? fs::path("results") : fs::path(args.out);
  const SuiteManifest manifest = run_suite(config, out, options);
  int failed = 0;
  for (const auto& task : manifest.tasks) {
    if (task.status != "ok") {
      ++failed;
      std::cerr << "task " << task.name << " failed: " << task.error << "\n";
    }
  }
  std::cout << "wrote " << (out / "manifest.json").string() << " (" << manifest.tasks.size()
            << " tasks, " << failed << " failed)\n";
  return failed == 0 ? exit_ok : exit_runtime;
}

int cmd_rwg(const GlobalArgs& args, const std::string& profile,
            const std::string& task_filter) {
  const ExperimentConfig config = load_config(args, profile);
  const ResolvedSuite suite = resolve_suite(config, profile);
  const fs::path out = args.out.empty() ? fs::path("results") : fs::path(args.out);

  bool matched = false;
  for (const auto& resolved : suite.tasks) {
    if (!task_filter.empty() && resolved.name != task_filter) continue;
    matched = true;
    RwgConfig rwg;
    rwg.policies = resolved.policies;
    rwg.episodes = resolved.episodes;
    rwg.master_seed = config.master_seed;
    rwg.policy = resolved.policy;
    rwg.task = resolved.task;

    std::cerr << "evaluating " << resolved.name << " (N=" << rwg.policies
              << ", M=" << rwg.episodes << ")\n";
    ReturnMatrix matrix = evaluate(rwg);
    matrix.config_json = to_json_string(rwg);
    const AggregateStats stats = aggregate(matrix);
    const DistributionArtifacts art =
        distribution_artifacts(stats, matrix, config.artifact_bins);

    const fs::path dir = out / resolved.name;
    write_return_matrix(dir / "returns.csv", matrix);
    write_text_file(dir / "aggregate.csv", aggregate_to_csv(stats));
    write_text_file(dir / "histogram.csv", histogram_to_csv(art));
    write_text_file(dir / "performance_curve.csv", curve_to_csv(art));
    write_text_file(dir / "performance_scatter.csv", scatter_to_csv(art));
    write_text_file(dir / "variance_cloud.csv", cloud_to_csv(art));
    std::cout << "wrote " << (dir / "returns.csv").string() << "\n";
  }
  if (!task_filter.empty() && !matched)
    throw std::invalid_argument("unknown task '" + task_filter + "'");
  return exit_ok;
}

int cmd_metrics(const GlobalArgs& args, const std::string& matrix_path,
                std::int64_t bins, double lambda, double sstar,
                const std::string& lambda_sweep) {
  if (!fs::exists(matrix_path))
    throw std::invalid_argument("matrix file not found: " + matrix_path);
  const ReturnMatrix matrix = read_return_matrix(matrix_path);

  PicConfig pic_cfg;
  pic_cfg.bins = bins;
  PoicConfig poic_cfg;
  poic_cfg.temperature = lambda;
  poic_cfg.optimal_return = sstar;

  if (!lambda_sweep.empty()) {
    std::cout << "lambda,poic,h_o,mean_h_o_given_theta,p1_hat\n";
    for (double l : parse_double_list(lambda_sweep, "--lambda-sweep")) {
      PoicConfig sweep = poic_cfg;
      sweep.temperature = l;
      const PoicResult r = poic(matrix, sweep);
      std::cout << format_double(l) << ',' << format_double(r.poic) << ','
                << format_double(r.h_o) << ',' << format_double(r.mean_h_o_given_theta)
                << ',' << format_double(r.p1_hat) << "\n";
    }
    return exit_ok;
  }

  const MetricReport report = compute_metric_report(matrix, pic_cfg, poic_cfg);
  const std::string json = to_json_string(report);
  if (args.out.empty()) {
    std::cout << json;
  } else {
    write_text_file(args.out, json);
    std::cout << "wrote " << args.out << "\n";
  }
  return exit_ok;
}

int cmd_stats(const GlobalArgs& args, const std::string& matrix_path,
              const std::string& metric_name, int resamples, std::int64_t bins,
              double lambda, double sstar, const std::string& label) {
  if (!fs::exists(matrix_path))
    throw std::invalid_argument("matrix file not found: " + matrix_path);
  const ReturnMatrix matrix = read_return_matrix(matrix_path);
  PicConfig pic_cfg;
  pic_cfg.bins = bins;
  PoicConfig poic_cfg;
  poic_cfg.temperature = lambda;
  poic_cfg.optimal_return = sstar;

  BootstrapResult result =
      bootstrap_metric(matrix, metric_kind_from_string(metric_name), pic_cfg, poic_cfg,
                       resamples, args.seed.value_or(0));
  result.label = label.empty() ? fs::path(matrix_path).parent_path().filename().string()
                               : label;
  const std::string json = to_json_string(result);
  if (args.out.empty()) {
    std::cout << json;
  } else {
    write_text_file(args.out, json);
    std::cout << "wrote " << args.out << "\n";
  }
  return exit_ok;
}

int cmd_compare(const GlobalArgs& args, const std::vector<std::string>& inputs) {
  if (inputs.size() < 2)
    throw std::invalid_argument("compare: need at least two bootstrap JSON files");
  std::vector<BootstrapResult> results;
  results.reserve(inputs.size());
  std::string metric;
  for (const auto& path : inputs) {
    if (!fs::exists(path)) throw std::invalid_argument("file not found: " + path);
    results.push_back(bootstrap_result_from_json(read_text_file(path)));
    if (results.back().label.empty())
      results.back().label = fs::path(path).stem().string();
    if (metric.empty()) metric = results.back().metric;
    if (results.back().metric != metric)
      throw std::invalid_argument("compare: inputs mix metrics (" + metric + " vs " +
                                  results.back().metric + ")");
  }
  std::vector<LabeledBootstrap> labeled;
  labeled.reserve(results.size());
  for (const auto& r : results) labeled.push_back({r.label, &r});

  std::vector<WelchTableRow> rows;
  for (const auto& cell : compare_tasks(labeled)) rows.push_back({metric, cell});
  const std::string csv = welch_table_to_csv(rows);
  if (args.out.empty()) {
    std::cout << csv;
  } else {
    write_text_file(args.out, csv);
    std::cout << "wrote " << args.out << "\n";
  }
  return exit_ok;
}

int cmd_bound(const GlobalArgs& args, const std::string& links_csv, double epsilon,
              long long samples) {
  ArmTask task;
  task.link_lengths = parse_double_list(links_csv, "--links");
  task.reward = RewardSpec::dense();
  task.validate();
  const BoundReport report = verify_bound(task, epsilon, samples, args.seed.value_or(0));
  std::cout << to_json_string(report);
  return report.first_order_violations == 0 ? exit_ok : exit_runtime;
}

int cmd_oracle() {
  const auto checks = run_oracle_checks();
  bool all_ok = true;
  std::printf("%-52s %12s %12s %10s  %s\n", "check", "value", "expected", "tol", "status");
  for (const auto& c : checks) {
    all_ok = all_ok && c.passed;
    std::printf("%-52s %12.8f %12.8f %10.2e  %s\n", c.name.c_str(), c.value, c.expected,
                c.tolerance, c.passed ? "PASS" : "FAIL");
  }
  return all_ok ? exit_ok : exit_runtime;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Random-weight-guessing task complexity toolkit"};
  app.require_subcommand(1);
  app.fallthrough();

  GlobalArgs global;
  app.add_option("--config", global.config, "experiment config JSON");
  std::int64_t seed_opt = -1;
  app.add_option("--seed", seed_opt, "master seed override");
  app.add_option("--threads", global.threads,
                 "worker threads (0 = all cores; env RWGC_THREADS overrides)");
  app.add_option("--out", global.out, "output file or directory");

  auto* suite = app.add_subcommand("suite", "run the full experiment suite");
  std::string profile;
  suite->add_option("--profile", profile, "scale profile from the config");
  bool parallel_tasks = false;
  suite->add_flag("--parallel-tasks", parallel_tasks, "run tasks concurrently");

  auto* rwg_cmd = app.add_subcommand("rwg", "evaluate random policies for one or all tasks");
  std::string rwg_profile, rwg_task;
  rwg_cmd->add_option("--profile", rwg_profile, "scale profile from the config");
  rwg_cmd->add_option("--task", rwg_task, "task name (default: all tasks)");

  auto* metrics_cmd = app.add_subcommand("metrics", "compute PIC/POIC from a matrix CSV");
  std::string matrix_path;
  std::int64_t bins = 100000;
  double lambda = 1.0, sstar = 0.0;
  std::string lambda_sweep;
  metrics_cmd->add_option("--matrix", matrix_path, "returns.csv path")->required();
  metrics_cmd->add_option("--bins", bins, "discretisation bins B");
  metrics_cmd->add_option("--lambda", lambda, "POIC temperature");
  metrics_cmd->add_option("--sstar", sstar, "optimal return S*");
  metrics_cmd->add_option("--lambda-sweep", lambda_sweep,
                          "comma-separated temperatures; prints a POIC table");

  auto* stats_cmd = app.add_subcommand("stats", "bootstrap a metric from a matrix CSV");
  std::string stats_matrix, stats_metric = "pic", stats_label;
  int resamples = 1000;
  std::int64_t stats_bins = 100000;
  double stats_lambda = 1.0, stats_sstar = 0.0;
  stats_cmd->add_option("--matrix", stats_matrix, "returns.csv path")->required();
  stats_cmd->add_option("--metric", stats_metric, "pic | poic");
  stats_cmd->add_option("--resamples", resamples, "bootstrap resamples K");
  stats_cmd->add_option("--bins", stats_bins, "discretisation bins B");
  stats_cmd->add_option("--lambda", stats_lambda, "POIC temperature");
  stats_cmd->add_option("--sstar", stats_sstar, "optimal return S*");
  stats_cmd->add_option("--label", stats_label, "task label stored in the result");

  auto* compare_cmd =
      app.add_subcommand("compare", "pairwise Welch tests over bootstrap results");
  std::vector<std::string> compare_inputs;
  compare_cmd->add_option("--inputs", compare_inputs, "bootstrap JSON files")
      ->required()
      ->delimiter(',');

  auto* bound_cmd = app.add_subcommand("bound", "end-effector error bound report");
  std::string links_csv;
  double epsilon = 1e-3;
  long long bound_samples = 100000;
  bound_cmd->add_option("--links", links_csv, "comma-separated link lengths")->required();
  bound_cmd->add_option("--epsilon", epsilon, "worst-case joint error (rad)");
  bound_cmd->add_option("--samples", bound_samples, "Monte-Carlo samples");

  auto* oracle_cmd = app.add_subcommand("oracle", "run the estimator-vs-oracle suite");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) return app.exit(e);  // --help and friends
    app.exit(e);
    return exit_usage;
  }

  if (seed_opt >= 0) global.seed = static_cast<std::uint64_t>(seed_opt);
  apply_threads(global);

  try {
    if (suite->parsed()) return cmd_suite(global, profile, parallel_tasks);
    if (rwg_cmd->parsed()) return cmd_rwg(global, rwg_profile, rwg_task);
    if (metrics_cmd->parsed())
      return cmd_metrics(global, matrix_path, bins, lambda, sstar, lambda_sweep);
    if (stats_cmd->parsed())
      return cmd_stats(global, stats_matrix, stats_metric, resamples, stats_bins,
                       stats_lambda, stats_sstar, stats_label);
    if (compare_cmd->parsed()) return cmd_compare(global, compare_inputs);
    if (bound_cmd->parsed()) return cmd_bound(global, links_csv, epsilon, bound_samples);
    if (oracle_cmd->parsed()) return cmd_oracle();
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return exit_usage;
  } catch (const std::exception& e) {
    std::cerr << "runtime error: " << e.what() << "\n";
    return exit_runtime;
  }
  return exit_usage;
}
