#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numeric>

#include "rwgc/rng.hpp"
#include "rwgc/rwg.hpp"
#include "test_util.hpp"

using namespace rwgc;
using rwgc::test::matrix_from_rows;
using rwgc::test::one_link;
using rwgc::test::policy_for;
using rwgc::test::two_link;

namespace {

RwgConfig small_config(int policies = 8, int episodes = 5) {
  RwgConfig config;
  config.policies = policies;
  config.episodes = episodes;
  config.master_seed = 4242;
  config.task = one_link(1.0);
  config.policy = policy_for(config.task, 1, 8);
  return config;
}

}  // namespace

TEST_CASE("evaluate: degenerate task with injected zero policy gives S = [[0, 0]]") {
  RwgConfig config = small_config(1, 2);
  config.task.reward = RewardSpec::dense();

  EvalHooks hooks;
  hooks.sampler = [](const PolicySpec& spec, std::uint64_t, int n) {
    ParameterVector zeros;
    zeros.policy_index = n;
    zeros.values.assign(static_cast<std::size_t>(spec.parameter_count()), 0.0);
    return zeros;
  };
  hooks.initializer = [](const ArmTask& task, std::uint64_t seed) {
    ArmState s = reset(task, seed);
    const std::span<const double> q(s.q.data(), static_cast<std::size_t>(task.dof()));
    s.goal = forward_kinematics(task, q);  // zero distance, zero action => zero reward
    return s;
  };

  const ReturnMatrix matrix = evaluate(config, {}, &hooks);
  REQUIRE(matrix.policies == 1);
  REQUIRE(matrix.episodes == 2);
  CHECK(matrix.at(0, 0) == 0.0);
  CHECK(matrix.at(0, 1) == 0.0);
}

TEST_CASE("evaluate twice gives identical matrices") {
  const RwgConfig config = small_config();
  const ReturnMatrix a = evaluate(config);
  const ReturnMatrix b = evaluate(config);
  CHECK(a.values == b.values);
}

TEST_CASE("evaluate is bitwise thread-count independent") {
  const RwgConfig config = small_config(12, 4);
  const ReturnMatrix serial = evaluate(config, {}, nullptr, 1);
  const ReturnMatrix threaded = evaluate(config, {}, nullptr, 4);
  CHECK(serial.values == threaded.values);
}

TEST_CASE("evaluate cells are recomputable in isolation") {
  const RwgConfig config = small_config(6, 3);
  const ReturnMatrix matrix = evaluate(config);
  const auto params = sample_parameters(config.policy, config.master_seed, 4);
  const double cell =
      run_episode(config.task, config.policy, params,
                  episode_seed(config.master_seed, 4, 2));
  CHECK(cell == matrix.at(4, 2));
}

TEST_CASE("returns are non-positive on the built-in tasks") {
  for (auto task : {one_link(1.0, RewardSpec::sparse()), two_link()}) {
    RwgConfig config;
    config.policies = 20;
    config.episodes = 4;
    config.master_seed = 7;
    config.task = task;
    config.policy = policy_for(task, 1, 8);
    const ReturnMatrix matrix = evaluate(config);
    for (double v : matrix.values) {
      CHECK(v <= 0.0);
      CHECK(std::isfinite(v));
    }
  }
}

TEST_CASE("sparse 2-link returns concentrate near the failure floor") {
  RwgConfig config;
  config.policies = 500;
  config.episodes = 4;
  config.master_seed = 2;
  config.task.link_lengths = {0.95, 0.70};
  config.task.reward = RewardSpec::sparse();
  config.policy = policy_for(config.task);
  const ReturnMatrix matrix = evaluate(config);

  const double max_return = *std::max_element(matrix.values.begin(), matrix.values.end());
  CHECK(max_return < -30.0);  // no random policy comes close to solving it

  long long near_floor = 0;
  for (double v : matrix.values)
    if (v <= -45.0) ++near_floor;
  CHECK(near_floor >= static_cast<long long>(matrix.values.size() * 9 / 10));
}

TEST_CASE("progress sink reports completion") {
  RwgConfig config = small_config(65, 2);
  long long last_done = 0, last_total = 0;
  const ReturnMatrix matrix = evaluate(config, [&](long long done, long long total) {
    last_done = std::max(last_done, done);
    last_total = total;
  });
  CHECK(last_done == 65);
  CHECK(last_total == 65);
  CHECK(matrix.policies == 65);
}

TEST_CASE("aggregate examples") {
  const auto m1 = matrix_from_rows({{1.0, 1.0}});
  const auto s1 = aggregate(m1);
  CHECK(s1.mean[0] == doctest::Approx(1.0));
  CHECK(s1.variance[0] == doctest::Approx(0.0));

  const auto m2 = matrix_from_rows({{0.0, 2.0}});
  const auto s2 = aggregate(m2);
  CHECK(s2.mean[0] == doctest::Approx(1.0));
  CHECK(s2.variance[0] == doctest::Approx(2.0));
}

TEST_CASE("rank breaks ties in sampling order") {
  const auto matrix = matrix_from_rows({{3.0, 3.0}, {1.0, 1.0}, {3.0, 3.0}, {0.0, 0.0}});
  const auto stats = aggregate(matrix);
  CHECK(stats.rank == std::vector<int>{3, 2, 4, 1});
}

TEST_CASE("aggregation matches a naive two-pass reference on random matrices") {
  Rng rng(64);
  for (int trial = 0; trial < 200; ++trial) {
    const int n = 1 + static_cast<int>(rng.next_below(10));
    const int m = 2 + static_cast<int>(rng.next_below(12));
    const auto matrix = rwgc::test::random_matrix(n, m, rng.next_u64(), -100.0, 50.0);
    const auto stats = aggregate(matrix);
    for (int row = 0; row < n; ++row) {
      // Naive reference computed the long way.
      double mean = 0.0;
      for (int e = 0; e < m; ++e) mean += matrix.at(row, e);
      mean /= m;
      double var = 0.0;
      for (int e = 0; e < m; ++e)
        var += (matrix.at(row, e) - mean) * (matrix.at(row, e) - mean);
      var /= (m - 1);
      CHECK(stats.mean[static_cast<std::size_t>(row)] ==
            doctest::Approx(mean).epsilon(1e-12));
      CHECK(stats.variance[static_cast<std::size_t>(row)] ==
            doctest::Approx(var).epsilon(1e-12));
      CHECK(stats.variance[static_cast<std::size_t>(row)] >= 0.0);
    }
  }
}

TEST_CASE("rank is always a permutation sorting means ascending") {
  Rng rng(65);
  for (int trial = 0; trial < 1000; ++trial) {
    const int n = 1 + static_cast<int>(rng.next_below(30));
    const auto matrix = rwgc::test::random_matrix(n, 3, rng.next_u64(), -5.0, 0.0);
    const auto stats = aggregate(matrix);
    std::vector<int> sorted = stats.rank;
    std::sort(sorted.begin(), sorted.end());
    for (int i = 0; i < n; ++i) REQUIRE(sorted[static_cast<std::size_t>(i)] == i + 1);
    std::vector<double> by_rank(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i)
      by_rank[static_cast<std::size_t>(stats.rank[static_cast<std::size_t>(i)] - 1)] =
          stats.mean[static_cast<std::size_t>(i)];
    CHECK(std::is_sorted(by_rank.begin(), by_rank.end()));
  }
}

TEST_CASE("min-max scaling examples and properties") {
  const std::vector<double> v = {2.0, 4.0, 6.0};
  CHECK(min_max_scale(v) == std::vector<double>{0.0, 0.5, 1.0});

  const std::vector<double> flat = {3.0, 3.0, 3.0};
  CHECK(min_max_scale(flat) == std::vector<double>{0.0, 0.0, 0.0});

  Rng rng(66);
  for (int trial = 0; trial < 1000; ++trial) {
    std::vector<double> data(2 + rng.next_below(40));
    for (auto& x : data) x = rng.next_uniform(-100.0, 100.0);
    const auto scaled = min_max_scale(data);
    const auto [lo, hi] = std::minmax_element(scaled.begin(), scaled.end());
    if (*std::minmax_element(data.begin(), data.end()).first !=
        *std::minmax_element(data.begin(), data.end()).second) {
      CHECK(*lo == 0.0);
      CHECK(*hi == 1.0);
    }
    for (double x : scaled) {
      CHECK(x >= 0.0);
      CHECK(x <= 1.0);
    }
  }
}

TEST_CASE("distribution artifacts: histogram conservation and curve monotonicity") {
  const auto matrix = rwgc::test::random_matrix(100, 10, 31, -40.0, 0.0);
  const auto stats = aggregate(matrix);
  const auto art = distribution_artifacts(stats, matrix, 16);

  long long total = 0;
  for (const auto& bin : art.histogram) total += bin.count;
  CHECK(total == 100);

  for (std::size_t i = 1; i < art.curve.size(); ++i) {
    CHECK(art.curve[i].rank == art.curve[i - 1].rank + 1);
    CHECK(art.curve[i].mean_scaled >= art.curve[i - 1].mean_scaled);
  }
  CHECK(art.scatter.size() == 1000);
  CHECK(art.cloud.size() == 100);
}

TEST_CASE("distribution artifacts: single policy occupies one bin") {
  const auto matrix = matrix_from_rows({{-1.0, -2.0, -3.0}});
  const auto stats = aggregate(matrix);
  const auto art = distribution_artifacts(stats, matrix, 10);
  int nonzero = 0;
  for (const auto& bin : art.histogram)
    if (bin.count > 0) ++nonzero;
  CHECK(nonzero == 1);
}

TEST_CASE("config validation") {
  RwgConfig config = small_config();
  config.episodes = 1;
  CHECK_THROWS_AS(config.validate(), std::invalid_argument);
  config = small_config();
  config.policies = 0;
  CHECK_THROWS_AS(config.validate(), std::invalid_argument);
  config = small_config();
  config.policy.input_dim = 7;  // wrong for a 1-link task
  CHECK_THROWS_AS(config.validate(), std::invalid_argument);
}
