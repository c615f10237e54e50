#include "rwgc/report.hpp"

#include <cctype>
#include <cmath>
#include <ostream>
#include <set>
#include <stdexcept>

#include "rwgc/config_json.hpp"
#include "rwgc/io.hpp"
#include "rwgc/oracle.hpp"
#include "rwgc/parallel.hpp"
#include "rwgc/stats.hpp"
#include "rwgc/svg.hpp"

namespace rwgc {

void ExperimentConfig::validate() const {
  if (profiles.empty()) throw std::invalid_argument("config: no profiles defined");
  if (!default_profile.empty() && !profiles.contains(default_profile))
    throw std::invalid_argument("config: default profile '" + default_profile +
                                "' is not defined");
  for (const auto& [name, p] : profiles) {
    if (p.policies < 1 || p.episodes < 2)
      throw std::invalid_argument("config: profile '" + name + "' has a bad scale");
  }
  pic.validate();
  poic.validate();
  if (bootstrap_resamples < 100)
    throw std::invalid_argument("config: stats resamples must be >= 100");
  std::set<std::string> names;
  for (const auto& entry : tasks) {
    if (entry.name.empty())
      throw std::invalid_argument("config: task names must be non-empty");
    for (char c : entry.name) {
      // Names become directory names and JSON fields.
      if (!std::isalnum(static_cast<unsigned char>(c)) && c != '-' && c != '_' && c != '.')
        throw std::invalid_argument("config: task name '" + entry.name +
                                    "' has characters outside [A-Za-z0-9._-]");
    }
    if (!names.insert(entry.name).second)
      throw std::invalid_argument("config: duplicate task name '" + entry.name + "'");
    entry.task.validate();
    PolicySpec bound = entry.policy;
    bind_policy_to_task(bound, entry.task);
    bound.validate();
  }
}

ResolvedSuite resolve_suite(const ExperimentConfig& config, const std::string& profile) {
  config.validate();
  const std::string chosen = profile.empty() ? config.default_profile : profile;
  const auto it = config.profiles.find(chosen);
  if (it == config.profiles.end())
    throw std::invalid_argument("unknown profile '" + chosen + "'");
  const ScaleProfile& scale = it->second;

  ResolvedSuite suite;
  suite.profile = chosen;
  suite.bootstrap_resamples =
      scale.bootstrap_resamples.value_or(config.bootstrap_resamples);
  for (const auto& entry : config.tasks) {
    ResolvedTask task;
    task.name = entry.name;
    task.task = entry.task;
    task.policy = entry.policy;
    bind_policy_to_task(task.policy, task.task);
    task.policies = scale.policies;
    task.episodes = scale.episodes;
    if (const auto ov = entry.scale.find(chosen); ov != entry.scale.end()) {
      if (ov->second.policies) task.policies = *ov->second.policies;
      if (ov->second.episodes) task.episodes = *ov->second.episodes;
    }
    suite.tasks.push_back(std::move(task));
  }
  return suite;
}

namespace {

struct TaskOutputs {
  ReturnMatrix matrix;
  AggregateStats stats;
  MetricReport report;
  BootstrapResult pic_boot;
  BootstrapResult poic_boot;
};

ManifestFile emit(const std::filesystem::path& out_dir, const std::string& rel,
                  const std::string& logical, const std::string& content) {
  const auto path = out_dir / rel;
  write_text_file(path, content);
  return {logical, rel, sha256_file(path)};
}

TaskOutputs run_task(const ResolvedTask& resolved, const ExperimentConfig& config,
                     int bootstrap_resamples, int threads) {
  RwgConfig rwg;
  rwg.policies = resolved.policies;
  rwg.episodes = resolved.episodes;
  rwg.master_seed = config.master_seed;
  rwg.policy = resolved.policy;
  rwg.task = resolved.task;

  TaskOutputs out;
  out.matrix = evaluate(rwg, {}, nullptr, threads);
  out.matrix.config_json = to_json_string(rwg);
  out.stats = aggregate(out.matrix);
  out.report = compute_metric_report(out.matrix, config.pic, config.poic);
  out.pic_boot = bootstrap_metric(out.matrix, MetricKind::pic, config.pic, config.poic,
                                  bootstrap_resamples, config.stats_seed, threads);
  out.pic_boot.label = resolved.name;
  out.poic_boot = bootstrap_metric(out.matrix, MetricKind::poic, config.pic, config.poic,
                                   bootstrap_resamples, config.stats_seed, threads);
  out.poic_boot.label = resolved.name;
  return out;
}

std::vector<ManifestFile> write_task_artifacts(const std::filesystem::path& out_dir,
                                               const std::string& task_name,
                                               const TaskOutputs& out, int artifact_bins) {
  std::vector<ManifestFile> files;
  const std::string dir = task_name + "/";

  files.push_back(emit(out_dir, dir + "returns.csv", "returns",
                       return_matrix_to_csv(out.matrix)));
  files.push_back(emit(out_dir, dir + "returns.config.json", "returns_config",
                       out.matrix.config_json));
  files.push_back(emit(out_dir, dir + "aggregate.csv", "aggregate",
                       aggregate_to_csv(out.stats)));

  const DistributionArtifacts art =
      distribution_artifacts(out.stats, out.matrix, artifact_bins);
  files.push_back(emit(out_dir, dir + "histogram.csv", "histogram", histogram_to_csv(art)));
  files.push_back(emit(out_dir, dir + "performance_curve.csv", "performance_curve",
                       curve_to_csv(art)));
  files.push_back(emit(out_dir, dir + "performance_scatter.csv", "performance_scatter",
                       scatter_to_csv(art)));
  files.push_back(emit(out_dir, dir + "variance_cloud.csv", "variance_cloud",
                       cloud_to_csv(art)));
  files.push_back(emit(out_dir, dir + "histogram.svg", "histogram_svg",
                       histogram_svg(art, task_name + ": mean performance histogram")));
  files.push_back(emit(out_dir, dir + "performance_curve.svg", "performance_curve_svg",
                       performance_curve_svg(art, task_name + ": performance curve")));
  files.push_back(emit(out_dir, dir + "variance_cloud.svg", "variance_cloud_svg",
                       variance_cloud_svg(art, task_name + ": variance distribution")));

  files.push_back(emit(out_dir, dir + "metrics.json", "metrics",
                       to_json_string(out.report)));
  files.push_back(emit(out_dir, dir + "bootstrap_pic.json", "bootstrap_pic",
                       to_json_string(out.pic_boot)));
  files.push_back(emit(out_dir, dir + "bootstrap_poic.json", "bootstrap_poic",
                       to_json_string(out.poic_boot)));
  return files;
}

std::string welch_matrix_json(std::span<const WelchTableRow> rows) {
  std::string csv_like = "[\n";
  bool first = true;
  for (const auto& r : rows) {
    if (!first) csv_like += ",\n";
    first = false;
    csv_like += "  {\"task_a\": \"" + r.cell.task_a + "\", \"task_b\": \"" +
                r.cell.task_b + "\", \"metric\": \"" + r.metric +
                "\", \"t\": " + format_double(r.cell.welch.t) +
                ", \"df\": " + format_double(r.cell.welch.df) +
                ", \"p\": " + format_double(r.cell.welch.p) + "}";
  }
  csv_like += "\n]\n";
  return csv_like;
}

std::string metric_table_json(std::span<const MetricTableRow> rows) {
  std::string s = "[\n";
  bool first = true;
  for (const auto& r : rows) {
    if (!first) s += ",\n";
    first = false;
    s += "  {\"task\": \"" + r.task + "\"";
    s += ", \"pic\": " + format_double(r.pic.point);
    s += ", \"pic_std\": " + format_double(r.pic.stddev);
    s += ", \"pic_ci_low\": " + format_double(r.pic.ci_low);
    s += ", \"pic_ci_high\": " + format_double(r.pic.ci_high);
    s += ", \"poic\": " + format_double(r.poic.point);
    s += ", \"poic_std\": " + format_double(r.poic.stddev);
    s += ", \"poic_ci_low\": " + format_double(r.poic.ci_low);
    s += ", \"poic_ci_high\": " + format_double(r.poic.ci_high);
    s += "}";
  }
  s += "\n]\n";
  return s;
}

}  // namespace

SuiteManifest run_suite(const ExperimentConfig& config,
                        const std::filesystem::path& output_dir,
                        const SuiteOptions& options) {
  const ResolvedSuite suite = resolve_suite(config, options.profile);
  std::filesystem::create_directories(output_dir);

  SuiteManifest manifest;
  manifest.profile = suite.profile;
  manifest.master_seed = config.master_seed;
  manifest.tasks.resize(suite.tasks.size());

  std::vector<TaskOutputs> outputs(suite.tasks.size());
  std::vector<bool> ok(suite.tasks.size(), false);

  const auto process = [&](std::size_t i, int eval_threads) {
    const ResolvedTask& resolved = suite.tasks[i];
    ManifestTask& entry = manifest.tasks[i];
    entry.name = resolved.name;
    try {
      if (options.log)
        (*options.log) << "[suite] task " << resolved.name << " (N=" << resolved.policies
                       << ", M=" << resolved.episodes << ")\n";
      outputs[i] = run_task(resolved, config, suite.bootstrap_resamples, eval_threads);
      entry.files = write_task_artifacts(output_dir, resolved.name, outputs[i],
                                         config.artifact_bins);
      entry.status = "ok";
      ok[i] = true;
    } catch (const std::exception& e) {
      entry.status = "error";
      entry.error = e.what();
    }
  };

  if (options.parallel_tasks && suite.tasks.size() > 1) {
    parallel_for(0, static_cast<std::int64_t>(suite.tasks.size()), options.threads,
                 [&](std::int64_t lo, std::int64_t hi) {
                   for (std::int64_t i = lo; i < hi; ++i)
                     process(static_cast<std::size_t>(i), 1);
                 });
  } else {
    for (std::size_t i = 0; i < suite.tasks.size(); ++i) process(i, options.threads);
  }

  // Cross-task artifacts over the tasks that succeeded.
  std::vector<MetricTableRow> table;
  std::vector<TaskMetricsInput> scatter_inputs;
  std::vector<LabeledBootstrap> pic_reports, poic_reports;
  for (std::size_t i = 0; i < suite.tasks.size(); ++i) {
    if (!ok[i]) continue;
    table.push_back({suite.tasks[i].name, outputs[i].pic_boot, outputs[i].poic_boot});
    scatter_inputs.push_back({suite.tasks[i].name, &outputs[i].matrix, &outputs[i].stats,
                              &outputs[i].report});
    pic_reports.push_back({suite.tasks[i].name, &outputs[i].pic_boot});
    poic_reports.push_back({suite.tasks[i].name, &outputs[i].poic_boot});
  }

  if (!table.empty()) {
    manifest.cross_task_files.push_back(
        emit(output_dir, "metric_table.csv", "metric_table", metric_table_to_csv(table)));
    manifest.cross_task_files.push_back(emit(output_dir, "metric_table.json",
                                             "metric_table_json", metric_table_json(table)));

    const ScoreScatterTable scatter = score_scatter(scatter_inputs);
    manifest.cross_task_files.push_back(emit(output_dir, "score_scatter.csv",
                                             "score_scatter", score_scatter_to_csv(scatter)));
  }
  if (pic_reports.size() >= 2) {
    std::vector<WelchTableRow> rows;
    for (const auto& cell : compare_tasks(pic_reports)) rows.push_back({"pic", cell});
    for (const auto& cell : compare_tasks(poic_reports)) rows.push_back({"poic", cell});
    manifest.cross_task_files.push_back(
        emit(output_dir, "welch_matrix.csv", "welch_matrix", welch_table_to_csv(rows)));
    manifest.cross_task_files.push_back(emit(output_dir, "welch_matrix.json",
                                             "welch_matrix_json", welch_matrix_json(rows)));
  }

  write_text_file(output_dir / "manifest.json", manifest_to_json(manifest));
  return manifest;
}

std::vector<OracleCheck> run_oracle_checks() {
  std::vector<OracleCheck> checks;
  const auto add = [&](const std::string& name, double value, double expected,
                       double tolerance) {
    checks.push_back({name, std::abs(value - expected) <= tolerance, value, expected,
                      tolerance});
  };

  // Plug-in PIC vs exact mutual information on synthetic joints.
  {
    const auto joint = oracle::DiscreteJoint::independent({0.5, 0.5}, {0.5, 0.5});
    const auto matrix = oracle::sample_matrix(joint, 1000, 100, 23);
    const PicResult estimate = pic(matrix, PicConfig{});
    add("pic on independent 2x2 joint ~ 0", estimate.pic, oracle::exact_mi(joint), 0.01);
  }
  {
    const auto joint = oracle::DiscreteJoint::diagonal(2);
    const auto matrix = oracle::sample_matrix(joint, 1000, 100, 24);
    const PicResult estimate = pic(matrix, PicConfig{});
    const double expected = oracle::exact_mi(joint);  // ln 2
    add("pic on correlated 2x2 joint ~ ln 2", estimate.pic, expected, 0.02 * expected);
  }
  {
    const auto joint = oracle::DiscreteJoint::diagonal(4);
    const auto matrix = oracle::sample_matrix(joint, 2000, 50, 25);
    const double expected = oracle::exact_mi(joint);  // ln 4
    const PicResult estimate = pic(matrix, PicConfig{});
    add("pic on diagonal 4x4 joint ~ ln 4", estimate.pic, expected, 0.02 * expected);
  }
  {
    const auto joint = oracle::DiscreteJoint::diagonal(2);
    const auto h = oracle::exact_entropies(joint);
    add("entropy identity H(X)+H(Y)-H(X,Y) = MI", h.hx + h.hy - h.hxy,
        oracle::exact_mi(joint), 1e-12);
  }

  // Welch p-values vs numeric CDF integration.
  {
    double worst = 0.0;
    for (const double df : {1.0, 2.0, 5.0, 18.0, 100.0}) {
      for (double t = -10.0; t <= 10.0; t += 0.5) {
        const double p_impl = student_t_two_sided_p(t, df);
        const double p_ref = 2.0 * (1.0 - oracle::t_cdf_numeric(std::abs(t), df));
        worst = std::max(worst, std::abs(p_impl - p_ref));
      }
    }
    add("two-sided p vs numeric t-CDF (worst abs diff)", worst, 0.0, 1e-8);
  }
  add("t_cdf_numeric(0, 7) = 1/2", oracle::t_cdf_numeric(0.0, 7.0), 0.5, 1e-12);
  add("t_cdf_numeric(1, 1) = 3/4 (Cauchy)", oracle::t_cdf_numeric(1.0, 1.0), 0.75, 1e-10);

  return checks;
}

}  // namespace rwgc
