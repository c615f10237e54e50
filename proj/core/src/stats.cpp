#include "rwgc/stats.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "rwgc/parallel.hpp"
#include "rwgc/rng.hpp"

namespace rwgc {

namespace {

// Continued fraction for the incomplete beta function (modified Lentz).
double beta_continued_fraction(double a, double b, double x) {
  constexpr double eps = 1e-16;
  constexpr double tiny = 1e-300;
  constexpr int max_iter = 500;

  const double qab = a + b;
  const double qap = a + 1.0;
  const double qam = a - 1.0;
  double c = 1.0;
  double d = 1.0 - qab * x / qap;
  if (std::abs(d) < tiny) d = tiny;
  d = 1.0 / d;
  double h = d;
  for (int m = 1; m <= max_iter; ++m) {
    const int m2 = 2 * m;
    double aa = m * (b - m) * x / ((qam + m2) * (a + m2));
    d = 1.0 + aa * d;
    if (std::abs(d) < tiny) d = tiny;
    c = 1.0 + aa / c;
    if (std::abs(c) < tiny) c = tiny;
    d = 1.0 / d;
    h *= d * c;
    aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2));
    d = 1.0 + aa * d;
    if (std::abs(d) < tiny) d = tiny;
    c = 1.0 + aa / c;
    if (std::abs(c) < tiny) c = tiny;
    d = 1.0 / d;
    const double del = d * c;
    h *= del;
    if (std::abs(del - 1.0) < eps) break;
  }
  return h;
}

double sample_mean(std::span<const double> v) {
  double s = 0.0;
  for (double x : v) s += x;
  return s / static_cast<double>(v.size());
}

double sample_variance(std::span<const double> v, double mean) {
  double s = 0.0;
  for (double x : v) s += (x - mean) * (x - mean);
  return s / static_cast<double>(v.size() - 1);
}

// Linear-interpolated empirical quantile on a sorted vector.
double sorted_quantile(const std::vector<double>& sorted, double q) {
  const double pos = q * static_cast<double>(sorted.size() - 1);
  const auto lo = static_cast<std::size_t>(pos);
  const std::size_t hi = std::min(lo + 1, sorted.size() - 1);
  const double frac = pos - static_cast<double>(lo);
  return sorted[lo] + frac * (sorted[hi] - sorted[lo]);
}

}  // namespace

double regularized_incomplete_beta(double a, double b, double x) {
  if (x <= 0.0) return 0.0;
  if (x >= 1.0) return 1.0;
  const double ln_front = std::lgamma(a + b) - std::lgamma(a) - std::lgamma(b) +
                          a * std::log(x) + b * std::log1p(-x);
  const double front = std::exp(ln_front);
  if (x < (a + 1.0) / (a + b + 2.0))
    return front * beta_continued_fraction(a, b, x) / a;
  return 1.0 - front * beta_continued_fraction(b, a, 1.0 - x) / b;
}

double student_t_two_sided_p(double t, double df) {
  if (!(df > 0.0)) throw std::invalid_argument("student_t: df must be > 0");
  if (std::isinf(t)) return 0.0;
  if (t == 0.0) return 1.0;
  const double x = df / (df + t * t);
  return regularized_incomplete_beta(0.5 * df, 0.5, x);
}

double student_t_cdf(double t, double df) {
  const double half_p = 0.5 * student_t_two_sided_p(t, df);
  return t >= 0.0 ? 1.0 - half_p : half_p;
}

WelchResult welch_test(std::span<const double> a, std::span<const double> b) {
  if (a.size() < 2 || b.size() < 2)
    throw std::invalid_argument("welch_test: need at least two values per sample");

  const auto na = static_cast<double>(a.size());
  const auto nb = static_cast<double>(b.size());
  const double ma = sample_mean(a);
  const double mb = sample_mean(b);
  const double va = sample_variance(a, ma);
  const double vb = sample_variance(b, mb);

  WelchResult result;
  if (va == 0.0 && vb == 0.0) {
    result.df = na + nb - 2.0;
    if (ma == mb) {
      result.t = 0.0;
      result.p = 1.0;
    } else {
      result.t = ma > mb ? std::numeric_limits<double>::infinity()
                         : -std::numeric_limits<double>::infinity();
      result.p = 0.0;
      result.degenerate = true;
    }
    return result;
  }

  const double sa = va / na;
  const double sb = vb / nb;
  const double se2 = sa + sb;
  result.t = (ma - mb) / std::sqrt(se2);
  result.df = se2 * se2 / (sa * sa / (na - 1.0) + sb * sb / (nb - 1.0));
  result.p = student_t_two_sided_p(result.t, result.df);
  return result;
}

BootstrapResult bootstrap_metric(const ReturnMatrix& matrix, MetricKind metric,
                                 const PicConfig& pic_cfg, const PoicConfig& poic_cfg,
                                 int resamples, std::uint64_t seed, int threads) {
  if (resamples < 100)
    throw std::invalid_argument("bootstrap_metric: need at least 100 resamples");
  if (matrix.policies < 1 || matrix.episodes < 2)
    throw std::invalid_argument("bootstrap_metric: matrix too small");

  BootstrapResult result;
  result.metric = to_string(metric);
  result.seed = seed;
  result.resamples.resize(static_cast<std::size_t>(resamples));

  if (metric == MetricKind::pic) {
    const PicResult point = pic(matrix, pic_cfg);
    result.point = point.pic;
    result.degenerate = point.degenerate;
  } else {
    result.point = poic(matrix, poic_cfg).poic;
  }

  const int n_policies = matrix.policies;
  const int n_episodes = matrix.episodes;

  parallel_for(0, resamples, threads, [&](std::int64_t lo, std::int64_t hi) {
    ReturnMatrix scratch;
    scratch.policies = n_policies;
    scratch.episodes = n_episodes;
    scratch.values.resize(static_cast<std::size_t>(n_policies) * n_episodes);
    for (std::int64_t k = lo; k < hi; ++k) {
      Rng rng(derive_seed(seed, stream::bootstrap, static_cast<std::uint64_t>(k)));
      for (int n = 0; n < n_policies; ++n) {
        const auto src = static_cast<int>(rng.next_below(static_cast<std::uint64_t>(n_policies)));
        const auto row = matrix.row(src);
        std::copy(row.begin(), row.end(),
                  scratch.values.begin() + static_cast<std::size_t>(n) * n_episodes);
      }
      result.resamples[static_cast<std::size_t>(k)] =
          metric == MetricKind::pic ? pic(scratch, pic_cfg).pic
                                    : poic(scratch, poic_cfg).poic;
    }
  });

  result.mean = sample_mean(result.resamples);
  result.stddev = std::sqrt(sample_variance(result.resamples, result.mean));
  std::vector<double> sorted = result.resamples;
  std::sort(sorted.begin(), sorted.end());
  result.ci_low = sorted_quantile(sorted, 0.025);
  result.ci_high = sorted_quantile(sorted, 0.975);
  return result;
}

std::vector<PairwiseCell> compare_tasks(std::span<const LabeledBootstrap> reports) {
  if (reports.size() < 2)
    throw std::invalid_argument("compare_tasks: need at least two reports");
  for (const auto& r : reports) {
    if (!r.result || r.result->resamples.empty())
      throw std::invalid_argument("compare_tasks: report '" + r.label +
                                  "' is missing its resample array");
  }

  std::vector<PairwiseCell> cells;
  cells.reserve(reports.size() * reports.size());
  for (const auto& row : reports) {
    for (const auto& col : reports) {
      cells.push_back(
          {row.label, col.label, welch_test(row.result->resamples, col.result->resamples)});
    }
  }
  return cells;
}

const char* to_string(MetricKind m) { return m == MetricKind::pic ? "pic" : "poic"; }

MetricKind metric_kind_from_string(std::string_view s) {
  if (s == "pic") return MetricKind::pic;
  if (s == "poic") return MetricKind::poic;
  throw std::invalid_argument("unknown metric: " + std::string(s));
}

}  // namespace rwgc
