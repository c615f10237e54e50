#include "rwgc/rwg.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <mutex>
#include <numeric>
#include <stdexcept>

#include "rwgc/parallel.hpp"
#include "rwgc/rng.hpp"

namespace rwgc {

void bind_policy_to_task(PolicySpec& policy, const ArmTask& task) {
  const int in = observation_dim(task);
  const int out = task.dof();
  if (policy.input_dim == 0) policy.input_dim = in;
  if (policy.output_dim == 0) policy.output_dim = out;
  if (policy.input_dim != in || policy.output_dim != out)
    throw std::invalid_argument("policy dimensions do not match the task layout");
}

void RwgConfig::validate() const {
  if (policies < 1) throw std::invalid_argument("rwg: need at least one policy");
  if (episodes < 2) throw std::invalid_argument("rwg: need at least two episodes");
  task.validate();
  policy.validate();
  if (policy.input_dim != observation_dim(task) || policy.output_dim != task.dof())
    throw std::invalid_argument("rwg: policy dimensions do not match the task");
}

std::uint64_t episode_seed(std::uint64_t master_seed, int policy_index,
                           int episode_index) {
  return derive_seed(master_seed, stream::episode,
                     static_cast<std::uint64_t>(policy_index),
                     static_cast<std::uint64_t>(episode_index));
}

namespace {

double run_episode_impl(const ArmTask& task, const PolicySpec& spec,
                        const ParameterVector& params, ArmState state,
                        ForwardWorkspace& ws, std::vector<double>& obs,
                        std::vector<double>& action) {
  obs.resize(static_cast<std::size_t>(spec.input_dim));
  action.resize(static_cast<std::size_t>(spec.output_dim));
  double total = 0.0;
  while (!state.terminated) {
    observe(task, state, obs);
    forward(spec, params, obs, action, ws);
    StepResult result = step(task, state, action);
    total += result.reward;
    state = result.state;
  }
  return total;
}

}  // namespace

double run_episode(const ArmTask& task, const PolicySpec& spec,
                   const ParameterVector& params, std::uint64_t seed) {
  return run_episode(task, spec, params, reset(task, seed));
}

double run_episode(const ArmTask& task, const PolicySpec& spec,
                   const ParameterVector& params, const ArmState& initial_state) {
  ForwardWorkspace ws;
  std::vector<double> obs, action;
  return run_episode_impl(task, spec, params, initial_state, ws, obs, action);
}

ReturnMatrix evaluate(const RwgConfig& config, const ProgressSink& progress,
                      const EvalHooks* hooks, int threads) {
  config.validate();
  const int n_policies = config.policies;
  const int n_episodes = config.episodes;

  ReturnMatrix matrix;
  matrix.policies = n_policies;
  matrix.episodes = n_episodes;
  matrix.master_seed = config.master_seed;
  matrix.values.resize(static_cast<std::size_t>(n_policies) * n_episodes);

  std::atomic<long long> done{0};
  std::mutex progress_mutex;

  parallel_for(0, n_policies, threads, [&](std::int64_t lo, std::int64_t hi) {
    ForwardWorkspace ws;
    std::vector<double> obs, action;
    for (std::int64_t n = lo; n < hi; ++n) {
      const ParameterVector params =
          hooks && hooks->sampler
              ? hooks->sampler(config.policy, config.master_seed, static_cast<int>(n))
              : sample_parameters(config.policy, config.master_seed,
                                  static_cast<int>(n));
      for (int e = 0; e < n_episodes; ++e) {
        const std::uint64_t seed =
            episode_seed(config.master_seed, static_cast<int>(n), e);
        const ArmState start = hooks && hooks->initializer
                                   ? hooks->initializer(config.task, seed)
                                   : reset(config.task, seed);
        matrix.at(static_cast<int>(n), e) =
            run_episode_impl(config.task, config.policy, params, start, ws, obs,
                             action);
      }
      if (progress) {
        const long long d = ++done;
        if (d % 64 == 0 || d == n_policies) {
          std::lock_guard<std::mutex> lock(progress_mutex);
          // Re-read under the lock so reported counts never go backwards.
          progress(done.load(), n_policies);
        }
      }
    }
  });
  return matrix;
}

AggregateStats aggregate(const ReturnMatrix& matrix) {
  if (matrix.episodes < 2)
    throw std::invalid_argument("aggregate: row variance needs episodes >= 2");
  const int n_policies = matrix.policies;
  const int n_episodes = matrix.episodes;

  AggregateStats stats;
  stats.mean.resize(static_cast<std::size_t>(n_policies));
  stats.variance.resize(static_cast<std::size_t>(n_policies));
  stats.rank.resize(static_cast<std::size_t>(n_policies));

  for (int n = 0; n < n_policies; ++n) {
    const auto row = matrix.row(n);
    double sum = 0.0;
    for (double v : row) sum += v;
    const double mean = sum / n_episodes;
    double sq = 0.0;
    for (double v : row) sq += (v - mean) * (v - mean);
    stats.mean[static_cast<std::size_t>(n)] = mean;
    stats.variance[static_cast<std::size_t>(n)] = sq / (n_episodes - 1);
  }

  std::vector<int> order(static_cast<std::size_t>(n_policies));
  std::iota(order.begin(), order.end(), 0);
  // stable sort keeps equal means in sampling order, which is the tie rule.
  std::stable_sort(order.begin(), order.end(), [&](int a, int b) {
    return stats.mean[static_cast<std::size_t>(a)] < stats.mean[static_cast<std::size_t>(b)];
  });
  for (int i = 0; i < n_policies; ++i)
    stats.rank[static_cast<std::size_t>(order[static_cast<std::size_t>(i)])] = i + 1;
  return stats;
}

std::vector<double> min_max_scale(std::span<const double> values) {
  if (values.empty()) throw std::invalid_argument("min_max_scale: empty input");
  const auto [lo_it, hi_it] = std::minmax_element(values.begin(), values.end());
  const double lo = *lo_it;
  const double hi = *hi_it;
  std::vector<double> out(values.size());
  if (hi == lo) return out;  // degenerate rule: all zeros
  const double range = hi - lo;
  // Divide rather than multiply by a reciprocal so the max lands exactly on 1.
  for (std::size_t i = 0; i < values.size(); ++i) out[i] = (values[i] - lo) / range;
  return out;
}

DistributionArtifacts distribution_artifacts(const AggregateStats& stats,
                                             const ReturnMatrix& matrix, int bins) {
  if (bins < 1) throw std::invalid_argument("distribution_artifacts: bins must be >= 1");
  const int n_policies = matrix.policies;
  const int n_episodes = matrix.episodes;

  const auto [lo_it, hi_it] =
      std::minmax_element(matrix.values.begin(), matrix.values.end());
  const double lo = *lo_it;
  const double hi = *hi_it;
  const double range = hi - lo;
  const auto scale = [&](double v) { return range == 0.0 ? 0.0 : (v - lo) / range; };

  DistributionArtifacts art;

  art.histogram.resize(static_cast<std::size_t>(bins));
  for (int b = 0; b < bins; ++b) {
    art.histogram[static_cast<std::size_t>(b)] = {
        b, static_cast<double>(b) / bins, static_cast<double>(b + 1) / bins, 0};
  }
  for (int n = 0; n < n_policies; ++n) {
    const double v = scale(stats.mean[static_cast<std::size_t>(n)]);
    const int b = std::min(bins - 1, static_cast<int>(v * bins));
    ++art.histogram[static_cast<std::size_t>(b)].count;
  }

  std::vector<int> by_rank(static_cast<std::size_t>(n_policies));
  for (int n = 0; n < n_policies; ++n)
    by_rank[static_cast<std::size_t>(stats.rank[static_cast<std::size_t>(n)] - 1)] = n;

  art.curve.reserve(static_cast<std::size_t>(n_policies));
  art.scatter.reserve(static_cast<std::size_t>(n_policies) * n_episodes);
  art.cloud.reserve(static_cast<std::size_t>(n_policies));
  for (int r = 0; r < n_policies; ++r) {
    const int n = by_rank[static_cast<std::size_t>(r)];
    art.curve.push_back({r + 1, n, scale(stats.mean[static_cast<std::size_t>(n)])});
    for (int e = 0; e < n_episodes; ++e)
      art.scatter.push_back({r + 1, n, e, scale(matrix.at(n, e))});
  }
  for (int n = 0; n < n_policies; ++n) {
    const double stddev = std::sqrt(stats.variance[static_cast<std::size_t>(n)]);
    art.cloud.push_back({n, scale(stats.mean[static_cast<std::size_t>(n)]),
                         range == 0.0 ? 0.0 : stddev / range});
  }
  return art;
}

}  // namespace rwgc
