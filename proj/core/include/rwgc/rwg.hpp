#pragma once

#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <vector>

#include "rwgc/dynamics.hpp"
#include "rwgc/policy.hpp"

namespace rwgc {

// One task evaluation: N random policies, M episodes each.
struct RwgConfig {
  int policies = 2000;   // N
  int episodes = 100;    // M >= 2 (row variance divides by M-1)
  std::uint64_t master_seed = 0;
  PolicySpec policy;
  ArmTask task;

  void validate() const;
};

// Fills input/output dims of `policy` from the task's observation/action
// layout; existing nonzero dims are validated instead.
void bind_policy_to_task(PolicySpec& policy, const ArmTask& task);

// The N x M array of episodic cumulative rewards, row-major by policy.
struct ReturnMatrix {
  int policies = 0;
  int episodes = 0;
  std::vector<double> values;
  std::uint64_t master_seed = 0;
  std::string config_json;  // echo of the producing config; empty if synthetic

  double at(int n, int e) const {
    return values[static_cast<std::size_t>(n) * episodes + e];
  }
  double& at(int n, int e) {
    return values[static_cast<std::size_t>(n) * episodes + e];
  }
  std::span<const double> row(int n) const {
    return {values.data() + static_cast<std::size_t>(n) * episodes,
            static_cast<std::size_t>(episodes)};
  }
};

// Called occasionally during evaluation; calls are serialized and the
// reported count never decreases.
using ProgressSink = std::function<void(long long policies_done, long long total)>;

// Test seams: replace parameter sampling or episode initialisation while
// keeping the evaluation loop itself intact. Production runs leave both empty.
struct EvalHooks {
  std::function<ParameterVector(const PolicySpec&, std::uint64_t, int)> sampler;
  std::function<ArmState(const ArmTask&, std::uint64_t)> initializer;
};

// Algorithm: for every policy n sample theta_n, run M episodes, store the
// undiscounted return in S[n][e]. Episode (n, e) runs on its own derived
// seed, so the matrix is bit-identical for any worker count.
ReturnMatrix evaluate(const RwgConfig& config, const ProgressSink& progress = {},
                      const EvalHooks* hooks = nullptr, int threads = 0);

// Single episode; exposed for spot checks of individual matrix cells.
double run_episode(const ArmTask& task, const PolicySpec& spec,
                   const ParameterVector& params, std::uint64_t episode_seed);
double run_episode(const ArmTask& task, const PolicySpec& spec,
                   const ParameterVector& params, const ArmState& initial_state);

std::uint64_t episode_seed(std::uint64_t master_seed, int policy_index,
                           int episode_index);

// Per-policy first two moments and the performance rank.
struct AggregateStats {
  std::vector<double> mean;      // M_n
  std::vector<double> variance;  // V_n, unbiased (M-1)
  std::vector<int> rank;         // R_n: 1 = lowest mean, ties in sampling order
};

AggregateStats aggregate(const ReturnMatrix& matrix);

// x' = (x - min) / (max - min); a constant input maps to all zeros.
std::vector<double> min_max_scale(std::span<const double> values);

// Tabular data behind the three performance plots. All values are reported
// on returns min-max scaled over the whole matrix, so tasks with different
// reward scales stay comparable.
struct DistributionArtifacts {
  struct HistogramBin {
    int index = 0;
    double lo = 0.0;
    double hi = 0.0;
    long long count = 0;
  };
  struct CurvePoint {
    int rank = 0;
    int policy_index = 0;
    double mean_scaled = 0.0;
  };
  struct ScatterPoint {
    int rank = 0;
    int policy_index = 0;
    int episode_index = 0;
    double return_scaled = 0.0;
  };
  struct CloudPoint {
    int policy_index = 0;
    double mean_scaled = 0.0;
    double stddev_scaled = 0.0;
  };
  std::vector<HistogramBin> histogram;  // over scaled means
  std::vector<CurvePoint> curve;        // rank-ordered scaled means
  std::vector<ScatterPoint> scatter;    // every episode return by rank
  std::vector<CloudPoint> cloud;        // (scaled mean, scaled stddev)
};

DistributionArtifacts distribution_artifacts(const AggregateStats& stats,
                                             const ReturnMatrix& matrix, int bins);

}  // namespace rwgc
