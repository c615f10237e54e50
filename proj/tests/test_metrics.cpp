#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>

#include "rwgc/metrics.hpp"
#include "rwgc/oracle.hpp"
#include "rwgc/rng.hpp"
#include "test_util.hpp"

using namespace rwgc;
using rwgc::test::matrix_from_rows;
using rwgc::test::random_matrix;

namespace {
constexpr double ln2 = 0.6931471805599453;

ReturnMatrix shuffle_rows(const ReturnMatrix& matrix, std::uint64_t seed) {
  std::vector<int> order(static_cast<std::size_t>(matrix.policies));
  for (int i = 0; i < matrix.policies; ++i) order[static_cast<std::size_t>(i)] = i;
  Rng rng(seed);
  for (int i = matrix.policies - 1; i > 0; --i)
    std::swap(order[static_cast<std::size_t>(i)],
              order[static_cast<std::size_t>(rng.next_below(static_cast<std::uint64_t>(i + 1)))]);
  ReturnMatrix out = matrix;
  for (int n = 0; n < matrix.policies; ++n) {
    const auto row = matrix.row(order[static_cast<std::size_t>(n)]);
    std::copy(row.begin(), row.end(),
              out.values.begin() + static_cast<std::size_t>(n) * matrix.episodes);
  }
  return out;
}

ReturnMatrix shuffle_episodes(const ReturnMatrix& matrix, std::uint64_t seed) {
  ReturnMatrix out = matrix;
  Rng rng(seed);
  for (int n = 0; n < matrix.policies; ++n) {
    double* row = out.values.data() + static_cast<std::size_t>(n) * matrix.episodes;
    for (int i = matrix.episodes - 1; i > 0; --i)
      std::swap(row[i], row[rng.next_below(static_cast<std::uint64_t>(i + 1))]);
  }
  return out;
}

}  // namespace

TEST_CASE("pic on a constant matrix is zero with a degeneracy flag") {
  const auto matrix = matrix_from_rows({{-3.0, -3.0}, {-3.0, -3.0}});
  const auto result = pic(matrix, PicConfig{});
  CHECK(result.pic == 0.0);
  CHECK(result.h_r == 0.0);
  CHECK(result.degenerate);
}

TEST_CASE("pic two-point analytic example, invariant in the bin count") {
  // Row A all zeros, row B all ones: H(R) = ln 2, conditionals are point
  // masses, so pic = ln 2 for every B >= 2.
  const auto matrix = matrix_from_rows({{0, 0, 0, 0}, {1, 1, 1, 1}});
  for (std::int64_t bins : {2LL, 3LL, 10LL, 1000LL, 100000LL, 100000000LL}) {
    PicConfig cfg;
    cfg.bins = bins;
    const auto result = pic(matrix, cfg);
    CHECK(result.h_r == doctest::Approx(ln2).epsilon(1e-12));
    CHECK(result.mean_h_r_given_theta == doctest::Approx(0.0));
    CHECK(result.pic == doctest::Approx(ln2).epsilon(1e-12));
    CHECK_FALSE(result.degenerate);
  }
}

TEST_CASE("pic is non-negative and permutation invariant") {
  Rng rng(12);
  for (int trial = 0; trial < 1000; ++trial) {
    const int n = 2 + static_cast<int>(rng.next_below(12));
    const int m = 2 + static_cast<int>(rng.next_below(10));
    const auto matrix = random_matrix(n, m, rng.next_u64());
    PicConfig cfg;
    cfg.bins = 2 + static_cast<std::int64_t>(rng.next_below(64));
    const auto base = pic(matrix, cfg);
    CHECK(base.pic >= -1e-9);

    const auto rows = pic(shuffle_rows(matrix, trial), cfg);
    CHECK(rows.pic == doctest::Approx(base.pic).epsilon(1e-12));
    const auto eps = pic(shuffle_episodes(matrix, trial), cfg);
    CHECK(eps.pic == doctest::Approx(base.pic).epsilon(1e-12));
  }
}

TEST_CASE("poic: all-optimal returns give zero") {
  const auto matrix = matrix_from_rows({{0.0, 0.0}, {0.0, 0.0}});
  PoicConfig cfg;  // S* = 0 matches every entry
  const auto result = poic(matrix, cfg);
  CHECK(result.p1_hat == doctest::Approx(1.0));
  CHECK(result.h_o == 0.0);
  CHECK(result.poic == 0.0);
}

TEST_CASE("poic analytic two-policy example (p1 = 0.8 / 0.2)") {
  // Constant rows at ln(0.8) and ln(0.2) with lambda = 1 and S* = 0 make
  // the soft optimality probabilities exactly 0.8 and 0.2.
  const double a = std::log(0.8);
  const double b = std::log(0.2);
  const auto matrix = matrix_from_rows({{a, a, a}, {b, b, b}});
  const auto result = poic(matrix, PoicConfig{});
  CHECK(result.p1_hat == doctest::Approx(0.5).epsilon(1e-12));
  CHECK(result.h_o == doctest::Approx(ln2).epsilon(1e-12));
  CHECK(result.mean_h_o_given_theta == doctest::Approx(0.500402).epsilon(1e-5));
  CHECK(result.poic == doctest::Approx(0.192745).epsilon(1e-4));
}

TEST_CASE("poic: identical conditional probabilities carry no information") {
  const auto matrix = matrix_from_rows({{-1.0, -2.0}, {-2.0, -1.0}, {-1.0, -2.0}});
  const auto result = poic(matrix, PoicConfig{});
  CHECK(result.poic == doctest::Approx(0.0).epsilon(1e-12));
}

TEST_CASE("poic bounds and non-negativity on random matrices") {
  Rng rng(13);
  for (int trial = 0; trial < 1000; ++trial) {
    const int n = 2 + static_cast<int>(rng.next_below(12));
    const int m = 2 + static_cast<int>(rng.next_below(10));
    const auto matrix = random_matrix(n, m, rng.next_u64(), -20.0, 0.0);
    PoicConfig cfg;
    cfg.temperature = rng.next_uniform(0.2, 5.0);
    const auto result = poic(matrix, cfg);
    CHECK(result.poic >= -1e-9);
    CHECK(result.poic <= ln2 + 1e-12);
    CHECK(result.p1_hat >= 0.0);
    CHECK(result.p1_hat <= 1.0);

    const auto rows = poic(shuffle_rows(matrix, trial), cfg);
    CHECK(rows.poic == doctest::Approx(result.poic).epsilon(1e-12));
  }
}

TEST_CASE("pic matches the exact MI oracle on synthetic joints") {
  {
    const auto joint = oracle::DiscreteJoint::independent({0.5, 0.5}, {0.5, 0.5});
    const auto matrix = oracle::sample_matrix(joint, 1000, 100, 2718);
    const auto result = pic(matrix, PicConfig{});
    CHECK(std::abs(result.pic - oracle::exact_mi(joint)) < 0.01);
  }
  {
    const auto joint = oracle::DiscreteJoint::diagonal(2);
    const auto matrix = oracle::sample_matrix(joint, 1000, 100, 314);
    const auto result = pic(matrix, PicConfig{});
    CHECK(result.pic == doctest::Approx(ln2).epsilon(0.02));
  }
}

TEST_CASE("metric report carries configs and the matrix hash") {
  const auto matrix = matrix_from_rows({{0.0, -1.0}, {-2.0, -3.0}});
  PicConfig pic_cfg;
  pic_cfg.bins = 4;
  PoicConfig poic_cfg;
  poic_cfg.temperature = 2.0;
  const auto report = compute_metric_report(matrix, pic_cfg, poic_cfg);
  CHECK(report.pic_config.bins == 4);
  CHECK(report.poic_config.temperature == 2.0);
  CHECK(report.matrix_sha256.size() == 64);
  const auto report2 = compute_metric_report(matrix, pic_cfg, poic_cfg);
  CHECK(report.matrix_sha256 == report2.matrix_sha256);
}

TEST_CASE("score_scatter degenerate cases") {
  const auto matrix = random_matrix(20, 5, 77);
  const auto stats = aggregate(matrix);
  const auto report = compute_metric_report(matrix, PicConfig{}, PoicConfig{});

  SUBCASE("single task: correlations undefined") {
    const TaskMetricsInput input{"solo", &matrix, &stats, &report};
    const auto table = score_scatter(std::span<const TaskMetricsInput>(&input, 1));
    REQUIRE(table.rows.size() == 1);
    for (const auto& corr : table.correlations) CHECK(std::isnan(corr.r));
  }

  SUBCASE("duplicated tasks: zero-variance columns give NaN") {
    const TaskMetricsInput input{"dup", &matrix, &stats, &report};
    const std::vector<TaskMetricsInput> inputs = {input, input, input};
    const auto table = score_scatter(inputs);
    REQUIRE(table.rows.size() == 3);
    for (const auto& corr : table.correlations) CHECK(std::isnan(corr.r));
  }
}

TEST_CASE("pearson of a non-constant column against itself is 1") {
  const std::vector<double> x = {1.0, 2.0, 4.0, 8.0};
  CHECK(pearson(x, x) == doctest::Approx(1.0).epsilon(1e-12));
  const std::vector<double> y = {1.0, 1.0, 1.0, 1.0};
  CHECK(std::isnan(pearson(x, y)));
  const std::vector<double> too_short = {1.0, 2.0};
  CHECK(std::isnan(pearson(too_short, too_short)));
}

TEST_CASE("pic config validation") {
  PicConfig cfg;
  cfg.bins = 1;
  CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);
  PoicConfig poic_cfg;
  poic_cfg.temperature = 0.0;
  CHECK_THROWS_AS(poic_cfg.validate(), std::invalid_argument);
}
