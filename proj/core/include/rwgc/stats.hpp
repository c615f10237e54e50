#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "rwgc/metrics.hpp"
#include "rwgc/rwg.hpp"

namespace rwgc {

enum class MetricKind { pic, poic };

struct BootstrapResult {
  std::string metric;             // "pic" | "poic"
  std::string label;              // task label, free-form
  double point = 0.0;             // metric on the original matrix
  std::vector<double> resamples;  // metric per bootstrap replicate
  double mean = 0.0;
  double stddev = 0.0;            // sample stddev of the replicates
  double ci_low = 0.0;            // 2.5% percentile
  double ci_high = 0.0;           // 97.5% percentile
  std::uint64_t seed = 0;
  bool degenerate = false;        // point estimate hit the metric's degeneracy
};

// Policy rows are resampled with replacement (the conditional entropies are
// per-policy, so rows are the exchangeable unit); the metric is recomputed
// from scratch on every replicate, bin edges included. Deterministic in seed
// for any thread count.
BootstrapResult bootstrap_metric(const ReturnMatrix& matrix, MetricKind metric,
                                 const PicConfig& pic_cfg, const PoicConfig& poic_cfg,
                                 int resamples, std::uint64_t seed, int threads = 0);

struct WelchResult {
  double t = 0.0;
  double df = 0.0;   // Welch-Satterthwaite
  double p = 1.0;    // two-sided
  bool degenerate = false;  // both samples constant with unequal means
};

// Unequal-variance two-sample t-test. Two constant equal samples give
// exactly (t=0, p=1); constant unequal samples give p=0 with the flag set.
WelchResult welch_test(std::span<const double> a, std::span<const double> b);

// Student-t helpers built on the regularised incomplete beta function
// (continued-fraction evaluation, ~1e-14 accuracy).
double student_t_two_sided_p(double t, double df);
double student_t_cdf(double t, double df);
double regularized_incomplete_beta(double a, double b, double x);

struct LabeledBootstrap {
  std::string label;
  const BootstrapResult* result = nullptr;
};

struct PairwiseCell {
  std::string task_a;
  std::string task_b;
  WelchResult welch;
};

// Full pairwise Welch matrix over the stored resample arrays, diagonal
// included. Throws if any input lacks its resamples.
std::vector<PairwiseCell> compare_tasks(std::span<const LabeledBootstrap> reports);

const char* to_string(MetricKind m);
MetricKind metric_kind_from_string(std::string_view s);

}  // namespace rwgc
