#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "rwgc/rwg.hpp"

namespace rwgc {

// Return-distribution discretisation for the PIC estimator. Entropies are
// always in nats.
struct PicConfig {
  enum class LogBase { natural };
  std::int64_t bins = 100000;  // B
  LogBase log_base = LogBase::natural;

  void validate() const;
};

// Soft-optimality estimator settings. optimal_return upper-bounds the
// attainable return; 0 fits every built-in task since all rewards are <= 0.
struct PoicConfig {
  double temperature = 1.0;   // lambda
  double optimal_return = 0.0;  // S*

  void validate() const;
};

struct PicResult {
  double pic = 0.0;
  double h_r = 0.0;                   // entropy of the pooled returns
  double mean_h_r_given_theta = 0.0;  // mean per-policy conditional entropy
  bool degenerate = false;            // all returns identical
};

struct PoicResult {
  double poic = 0.0;
  double h_o = 0.0;                   // binary entropy of p1_hat
  double mean_h_o_given_theta = 0.0;  // mean binary entropy of p1_hat_n
  double p1_hat = 0.0;
};

// Plug-in mutual information between policy index and binned return.
// Bin edges split [min S, max S] into B equal parts; intervals are
// half-open with the last bin closed so the max sample counts once.
// Empty bins contribute nothing (0 log 0 = 0).
PicResult pic(const ReturnMatrix& matrix, const PicConfig& cfg);

// Mutual information between policy index and the soft optimality variable:
// p1_n = mean_e exp((S_ne - S_max) / lambda), S_max = max(max S, S*).
PoicResult poic(const ReturnMatrix& matrix, const PoicConfig& cfg);

struct MetricReport {
  PicResult pic;
  PoicResult poic;
  PicConfig pic_config;
  PoicConfig poic_config;
  std::string matrix_sha256;     // content hash of the canonical matrix CSV
  std::string provenance_json;   // config echo carried by the matrix
};

MetricReport compute_metric_report(const ReturnMatrix& matrix,
                                   const PicConfig& pic_cfg,
                                   const PoicConfig& poic_cfg);

// One row per task for the cross-task scatter: how normalised performance
// relates to the information metrics and their entropy terms.
struct TaskMetricsInput {
  std::string label;
  const ReturnMatrix* matrix = nullptr;
  const AggregateStats* stats = nullptr;
  const MetricReport* report = nullptr;
};

struct ScoreScatterRow {
  std::string task;
  double score_mean = 0.0;        // mean min-max-scaled return
  double pic = 0.0;
  double poic = 0.0;
  double h_r = 0.0;
  double h_r_given_theta = 0.0;
  double h_o = 0.0;
  double h_o_given_theta = 0.0;
  double return_variance = 0.0;   // variance of the scaled returns
};

struct ScoreScatterTable {
  std::vector<ScoreScatterRow> rows;
  struct Correlation {
    std::string column;
    double r = 0.0;  // NaN when undefined (<3 tasks or zero variance)
  };
  std::vector<Correlation> correlations;  // Pearson r of score vs column
};

ScoreScatterTable score_scatter(std::span<const TaskMetricsInput> tasks);

// Pearson correlation; NaN for short or zero-variance inputs.
double pearson(std::span<const double> x, std::span<const double> y);

}  // namespace rwgc
