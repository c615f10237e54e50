#include <benchmark/benchmark.h>

#include <vector>

#include "rwgc/dynamics.hpp"
#include "rwgc/metrics.hpp"
#include "rwgc/policy.hpp"
#include "rwgc/rng.hpp"
#include "rwgc/rwg.hpp"
#include "rwgc/stats.hpp"

using namespace rwgc;

namespace {

ArmTask two_link_task() {
  ArmTask task;
  task.link_lengths = {0.95, 0.70};
  task.reward = RewardSpec::dense();
  return task;
}

PolicySpec suite_policy(const ArmTask& task) {
  PolicySpec spec;
  bind_policy_to_task(spec, task);
  return spec;
}

void BM_forward_pass(benchmark::State& state) {
  const ArmTask task = two_link_task();
  const PolicySpec spec = suite_policy(task);
  const ParameterVector params = sample_parameters(spec, 1, 0);
  const ArmState arm = reset(task, 7);
  const auto obs = observe(task, arm);
  std::vector<double> action(2);
  ForwardWorkspace ws;
  for (auto _ : state) {
    forward(spec, params, obs, action, ws);
    benchmark::DoNotOptimize(action.data());
  }
}
BENCHMARK(BM_forward_pass);

void BM_dynamics_step(benchmark::State& state) {
  const ArmTask task = two_link_task();
  ArmState arm = reset(task, 7);
  arm.qdot = {1.0, -0.5};
  const std::vector<double> action = {0.4, -0.3};
  for (auto _ : state) {
    StepResult result = step(task, arm, action);
    result.state.steps_taken = 0;
    result.state.terminated = false;
    arm = result.state;
    benchmark::DoNotOptimize(arm);
  }
}
BENCHMARK(BM_dynamics_step);

void BM_episode(benchmark::State& state) {
  const ArmTask task = two_link_task();
  const PolicySpec spec = suite_policy(task);
  const ParameterVector params = sample_parameters(spec, 1, 0);
  std::uint64_t seed = 0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(run_episode(task, spec, params, ++seed));
  }
}
BENCHMARK(BM_episode);

void BM_evaluate(benchmark::State& state) {
  RwgConfig config;
  config.policies = static_cast<int>(state.range(0));
  config.episodes = 10;
  config.master_seed = 3;
  config.task = two_link_task();
  config.policy = suite_policy(config.task);
  for (auto _ : state) {
    benchmark::DoNotOptimize(evaluate(config));
  }
  state.SetItemsProcessed(state.iterations() * state.range(0) * 10);
}
BENCHMARK(BM_evaluate)->Arg(32)->Arg(128);

void BM_pic(benchmark::State& state) {
  Rng rng(5);
  ReturnMatrix matrix;
  matrix.policies = static_cast<int>(state.range(0));
  matrix.episodes = 100;
  matrix.values.resize(static_cast<std::size_t>(matrix.policies) * 100);
  for (auto& v : matrix.values) v = rng.next_uniform(-100.0, 0.0);
  for (auto _ : state) {
    benchmark::DoNotOptimize(pic(matrix, PicConfig{}));
  }
}
BENCHMARK(BM_pic)->Arg(500)->Arg(2000);

void BM_poic(benchmark::State& state) {
  Rng rng(5);
  ReturnMatrix matrix;
  matrix.policies = static_cast<int>(state.range(0));
  matrix.episodes = 100;
  matrix.values.resize(static_cast<std::size_t>(matrix.policies) * 100);
  for (auto& v : matrix.values) v = rng.next_uniform(-100.0, 0.0);
  for (auto _ : state) {
    benchmark::DoNotOptimize(poic(matrix, PoicConfig{}));
  }
}
BENCHMARK(BM_poic)->Arg(2000);

void BM_bootstrap_pic(benchmark::State& state) {
  Rng rng(5);
  ReturnMatrix matrix;
  matrix.policies = 500;
  matrix.episodes = 50;
  matrix.values.resize(500 * 50);
  for (auto& v : matrix.values) v = rng.next_uniform(-100.0, 0.0);
  for (auto _ : state) {
    benchmark::DoNotOptimize(
        bootstrap_metric(matrix, MetricKind::pic, PicConfig{}, PoicConfig{}, 100, 1));
  }
}
BENCHMARK(BM_bootstrap_pic);

}  // namespace

BENCHMARK_MAIN();
