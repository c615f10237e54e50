#include "rwgc/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "rwgc/sha256.hpp"

namespace rwgc {

void PicConfig::validate() const {
  if (bins < 2) throw std::invalid_argument("pic: bins must be >= 2");
}

void PoicConfig::validate() const {
  if (!(temperature > 0.0))
    throw std::invalid_argument("poic: temperature must be > 0");
}

namespace {

// H in nats from counts: ln(total) - (1/total) * sum c ln c.
double entropy_from_counts(std::span<const std::int64_t> counts, std::int64_t total) {
  double acc = 0.0;
  for (std::int64_t c : counts) {
    if (c > 0) acc += static_cast<double>(c) * std::log(static_cast<double>(c));
  }
  return std::log(static_cast<double>(total)) - acc / static_cast<double>(total);
}

double entropy_from_sorted_runs(std::span<const std::int64_t> sorted_bins) {
  const std::int64_t total = static_cast<std::int64_t>(sorted_bins.size());
  double acc = 0.0;
  std::size_t i = 0;
  while (i < sorted_bins.size()) {
    std::size_t j = i + 1;
    while (j < sorted_bins.size() && sorted_bins[j] == sorted_bins[i]) ++j;
    const double c = static_cast<double>(j - i);
    acc += c * std::log(c);
    i = j;
  }
  return std::log(static_cast<double>(total)) - acc / static_cast<double>(total);
}

double binary_entropy(double p) {
  if (p <= 0.0 || p >= 1.0) return 0.0;
  return -p * std::log(p) - (1.0 - p) * std::log(1.0 - p);
}

}  // namespace

PicResult pic(const ReturnMatrix& matrix, const PicConfig& cfg) {
  cfg.validate();
  if (matrix.policies < 1 || matrix.episodes < 1 || matrix.values.empty())
    throw std::invalid_argument("pic: empty return matrix");

  const auto [lo_it, hi_it] =
      std::minmax_element(matrix.values.begin(), matrix.values.end());
  const double lo = *lo_it;
  const double hi = *hi_it;

  PicResult result;
  if (hi == lo) {
    // Point mass: zero entropy everywhere.
    result.degenerate = true;
    return result;
  }

  const std::int64_t bins = cfg.bins;
  const double scale = static_cast<double>(bins) / (hi - lo);
  const auto bin_of = [&](double v) {
    const auto b = static_cast<std::int64_t>((v - lo) * scale);
    return std::min(bins - 1, std::max<std::int64_t>(0, b));
  };

  const std::int64_t total =
      static_cast<std::int64_t>(matrix.policies) * matrix.episodes;

  // Dense counting for moderate B, sorted-run counting otherwise.
  constexpr std::int64_t dense_limit = std::int64_t{1} << 22;
  if (bins <= dense_limit) {
    std::vector<std::int64_t> global(static_cast<std::size_t>(bins), 0);
    std::vector<std::int64_t> row_bins(static_cast<std::size_t>(matrix.episodes));
    double cond_sum = 0.0;
    for (int n = 0; n < matrix.policies; ++n) {
      const auto row = matrix.row(n);
      for (int e = 0; e < matrix.episodes; ++e) {
        const std::int64_t b = bin_of(row[static_cast<std::size_t>(e)]);
        ++global[static_cast<std::size_t>(b)];
        row_bins[static_cast<std::size_t>(e)] = b;
      }
      std::sort(row_bins.begin(), row_bins.end());
      cond_sum += entropy_from_sorted_runs(row_bins);
    }
    result.h_r = entropy_from_counts(global, total);
    result.mean_h_r_given_theta = cond_sum / matrix.policies;
  } else {
    std::vector<std::int64_t> all(static_cast<std::size_t>(total));
    std::vector<std::int64_t> row_bins(static_cast<std::size_t>(matrix.episodes));
    double cond_sum = 0.0;
    std::size_t k = 0;
    for (int n = 0; n < matrix.policies; ++n) {
      const auto row = matrix.row(n);
      for (int e = 0; e < matrix.episodes; ++e) {
        const std::int64_t b = bin_of(row[static_cast<std::size_t>(e)]);
        all[k++] = b;
        row_bins[static_cast<std::size_t>(e)] = b;
      }
      std::sort(row_bins.begin(), row_bins.end());
      cond_sum += entropy_from_sorted_runs(row_bins);
    }
    std::sort(all.begin(), all.end());
    result.h_r = entropy_from_sorted_runs(all);
    result.mean_h_r_given_theta = cond_sum / matrix.policies;
  }

  result.pic = result.h_r - result.mean_h_r_given_theta;
  return result;
}

PoicResult poic(const ReturnMatrix& matrix, const PoicConfig& cfg) {
  cfg.validate();
  if (matrix.policies < 1 || matrix.episodes < 1 || matrix.values.empty())
    throw std::invalid_argument("poic: empty return matrix");

  const double observed_max =
      *std::max_element(matrix.values.begin(), matrix.values.end());
  const double s_max = std::max(observed_max, cfg.optimal_return);
  const double inv_lambda = 1.0 / cfg.temperature;

  PoicResult result;
  double p1_sum = 0.0;
  double cond_sum = 0.0;
  for (int n = 0; n < matrix.policies; ++n) {
    const auto row = matrix.row(n);
    double acc = 0.0;
    for (double s : row) acc += std::exp((s - s_max) * inv_lambda);
    const double p1n = acc / matrix.episodes;
    p1_sum += p1n;
    cond_sum += binary_entropy(p1n);
  }
  result.p1_hat = p1_sum / matrix.policies;
  result.h_o = binary_entropy(result.p1_hat);
  result.mean_h_o_given_theta = cond_sum / matrix.policies;
  result.poic = result.h_o - result.mean_h_o_given_theta;
  return result;
}

MetricReport compute_metric_report(const ReturnMatrix& matrix,
                                   const PicConfig& pic_cfg,
                                   const PoicConfig& poic_cfg) {
  MetricReport report;
  report.pic = pic(matrix, pic_cfg);
  report.poic = poic(matrix, poic_cfg);
  report.pic_config = pic_cfg;
  report.poic_config = poic_cfg;
  report.matrix_sha256 = return_matrix_sha256(matrix);
  report.provenance_json = matrix.config_json;
  return report;
}

double pearson(std::span<const double> x, std::span<const double> y) {
  const double nan = std::numeric_limits<double>::quiet_NaN();
  if (x.size() != y.size() || x.size() < 3) return nan;
  const auto n = static_cast<double>(x.size());
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    mx += x[i];
    my += y[i];
  }
  mx /= n;
  my /= n;
  double sxx = 0.0, syy = 0.0, sxy = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double dx = x[i] - mx;
    const double dy = y[i] - my;
    sxx += dx * dx;
    syy += dy * dy;
    sxy += dx * dy;
  }
  if (sxx == 0.0 || syy == 0.0) return nan;
  return sxy / std::sqrt(sxx * syy);
}

ScoreScatterTable score_scatter(std::span<const TaskMetricsInput> tasks) {
  if (tasks.empty()) throw std::invalid_argument("score_scatter: no tasks");

  ScoreScatterTable table;
  table.rows.reserve(tasks.size());
  for (const auto& t : tasks) {
    if (!t.matrix || !t.stats || !t.report)
      throw std::invalid_argument("score_scatter: incomplete task input");
    const auto scaled = min_max_scale(t.matrix->values);
    double mean = 0.0;
    for (double v : scaled) mean += v;
    mean /= static_cast<double>(scaled.size());
    double var = 0.0;
    for (double v : scaled) var += (v - mean) * (v - mean);
    var /= static_cast<double>(scaled.size());

    table.rows.push_back({t.label, mean, t.report->pic.pic, t.report->poic.poic,
                          t.report->pic.h_r, t.report->pic.mean_h_r_given_theta,
                          t.report->poic.h_o, t.report->poic.mean_h_o_given_theta,
                          var});
  }

  std::vector<double> score;
  score.reserve(table.rows.size());
  for (const auto& r : table.rows) score.push_back(r.score_mean);

  const auto add_corr = [&](const std::string& name, auto getter) {
    std::vector<double> col;
    col.reserve(table.rows.size());
    for (const auto& r : table.rows) col.push_back(getter(r));
    table.correlations.push_back({name, pearson(score, col)});
  };
  add_corr("pic", [](const ScoreScatterRow& r) { return r.pic; });
  add_corr("poic", [](const ScoreScatterRow& r) { return r.poic; });
  add_corr("h_r", [](const ScoreScatterRow& r) { return r.h_r; });
  add_corr("h_r_given_theta", [](const ScoreScatterRow& r) { return r.h_r_given_theta; });
  add_corr("h_o", [](const ScoreScatterRow& r) { return r.h_o; });
  add_corr("h_o_given_theta", [](const ScoreScatterRow& r) { return r.h_o_given_theta; });
  add_corr("return_variance", [](const ScoreScatterRow& r) { return r.return_variance; });
  return table;
}

}  // namespace rwgc
