#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "rwgc/metrics.hpp"
#include "rwgc/rwg.hpp"

namespace rwgc {

// Evaluation scale. Profiles let one config file carry both the quick and
// the full-size run (e.g. "ci" vs "paper").
struct ScaleProfile {
  int policies = 0;   // N
  int episodes = 0;   // M
  std::optional<int> bootstrap_resamples;  // overrides the stats default
};

// Per-task, per-profile scale override (the obstacle task runs smaller in CI).
struct ScaleOverride {
  std::optional<int> policies;
  std::optional<int> episodes;
};

struct TaskEntry {
  std::string name;
  ArmTask task;
  PolicySpec policy;
  std::map<std::string, ScaleOverride> scale;  // keyed by profile name
};

struct ExperimentConfig {
  std::string default_profile;
  std::map<std::string, ScaleProfile> profiles;
  std::uint64_t master_seed = 0;
  PicConfig pic;
  PoicConfig poic;
  int bootstrap_resamples = 1000;
  std::uint64_t stats_seed = 0;
  int artifact_bins = 50;
  std::vector<TaskEntry> tasks;

  void validate() const;
};

// A task with its scales pinned for one profile.
struct ResolvedTask {
  std::string name;
  ArmTask task;
  PolicySpec policy;  // dims bound to the task
  int policies = 0;
  int episodes = 0;
};

struct ResolvedSuite {
  std::string profile;
  std::vector<ResolvedTask> tasks;
  int bootstrap_resamples = 0;
};

ResolvedSuite resolve_suite(const ExperimentConfig& config, const std::string& profile);

struct ManifestFile {
  std::string name;    // logical artifact name
  std::string path;    // relative to the output directory
  std::string sha256;
};

struct ManifestTask {
  std::string name;
  std::string status;  // "ok" | "error"
  std::string error;   // empty when ok
  std::vector<ManifestFile> files;
};

struct SuiteManifest {
  std::string profile;
  std::uint64_t master_seed = 0;
  std::vector<ManifestTask> tasks;
  std::vector<ManifestFile> cross_task_files;
};

struct SuiteOptions {
  std::string profile;        // empty = config default
  int threads = 0;            // 0 = process default
  bool parallel_tasks = false;
  std::ostream* log = nullptr;
};

// Full pipeline per task: evaluate, aggregate, distribution artifacts (CSV +
// SVG), metric report, bootstrap CIs; then the cross-task metric table,
// pairwise Welch matrices and score scatter. A failing task is recorded in
// the manifest and the rest continue. Rerunning with the same config and
// seeds reproduces every CSV/JSON artifact byte for byte at any thread count.
SuiteManifest run_suite(const ExperimentConfig& config,
                        const std::filesystem::path& output_dir,
                        const SuiteOptions& options = {});

// Estimator-vs-oracle checks behind the `oracle` CLI subcommand.
struct OracleCheck {
  std::string name;
  bool passed = false;
  double value = 0.0;
  double expected = 0.0;
  double tolerance = 0.0;
};
std::vector<OracleCheck> run_oracle_checks();

}  // namespace rwgc
