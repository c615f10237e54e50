#include "rwgc/oracle.hpp"

#include <cmath>
#include <stdexcept>

#include "rwgc/rng.hpp"

namespace rwgc {
namespace oracle {

void DiscreteJoint::validate() const {
  if (symbols < 1 || bins < 1)
    throw std::invalid_argument("joint: needs at least one symbol and one bin");
  if (p.size() != static_cast<std::size_t>(symbols) * bins)
    throw std::invalid_argument("joint: probability table has wrong size");
  double sum = 0.0;
  for (double v : p) {
    if (v < 0.0) throw std::invalid_argument("joint: negative probability");
    sum += v;
  }
  if (std::abs(sum - 1.0) > 1e-12)
    throw std::invalid_argument("joint: probabilities must sum to 1");
}

DiscreteJoint DiscreteJoint::independent(std::vector<double> px, std::vector<double> py) {
  DiscreteJoint joint;
  joint.symbols = static_cast<int>(px.size());
  joint.bins = static_cast<int>(py.size());
  joint.p.resize(px.size() * py.size());
  for (std::size_t x = 0; x < px.size(); ++x)
    for (std::size_t y = 0; y < py.size(); ++y) joint.p[x * py.size() + y] = px[x] * py[y];
  joint.validate();
  return joint;
}

DiscreteJoint DiscreteJoint::diagonal(int k) {
  DiscreteJoint joint;
  joint.symbols = k;
  joint.bins = k;
  joint.p.assign(static_cast<std::size_t>(k) * k, 0.0);
  for (int i = 0; i < k; ++i)
    joint.p[static_cast<std::size_t>(i) * k + i] = 1.0 / k;
  joint.validate();
  return joint;
}

double exact_mi(const DiscreteJoint& joint) {
  joint.validate();
  std::vector<double> px(static_cast<std::size_t>(joint.symbols), 0.0);
  std::vector<double> py(static_cast<std::size_t>(joint.bins), 0.0);
  for (int x = 0; x < joint.symbols; ++x)
    for (int y = 0; y < joint.bins; ++y) {
      px[static_cast<std::size_t>(x)] += joint.at(x, y);
      py[static_cast<std::size_t>(y)] += joint.at(x, y);
    }
  double mi = 0.0;
  for (int x = 0; x < joint.symbols; ++x)
    for (int y = 0; y < joint.bins; ++y) {
      const double pxy = joint.at(x, y);
      if (pxy > 0.0)
        mi += pxy * std::log(pxy / (px[static_cast<std::size_t>(x)] * py[static_cast<std::size_t>(y)]));
    }
  return mi;
}

JointEntropies exact_entropies(const DiscreteJoint& joint) {
  joint.validate();
  std::vector<double> px(static_cast<std::size_t>(joint.symbols), 0.0);
  std::vector<double> py(static_cast<std::size_t>(joint.bins), 0.0);
  for (int x = 0; x < joint.symbols; ++x)
    for (int y = 0; y < joint.bins; ++y) {
      px[static_cast<std::size_t>(x)] += joint.at(x, y);
      py[static_cast<std::size_t>(y)] += joint.at(x, y);
    }
  JointEntropies h;
  for (double v : px)
    if (v > 0.0) h.hx -= v * std::log(v);
  for (double v : py)
    if (v > 0.0) h.hy -= v * std::log(v);
  for (double v : joint.p)
    if (v > 0.0) h.hxy -= v * std::log(v);
  return h;
}

ReturnMatrix sample_matrix(const DiscreteJoint& joint, int policies, int episodes,
                           std::uint64_t seed) {
  joint.validate();
  if (policies < 1 || episodes < 1)
    throw std::invalid_argument("sample_matrix: need positive dimensions");

  std::vector<double> px(static_cast<std::size_t>(joint.symbols), 0.0);
  for (int x = 0; x < joint.symbols; ++x)
    for (int y = 0; y < joint.bins; ++y) px[static_cast<std::size_t>(x)] += joint.at(x, y);

  const auto draw = [](Rng& rng, const std::vector<double>& weights, double total) {
    double u = rng.next_double() * total;
    for (std::size_t i = 0; i + 1 < weights.size(); ++i) {
      if (u < weights[i]) return static_cast<int>(i);
      u -= weights[i];
    }
    return static_cast<int>(weights.size() - 1);
  };

  ReturnMatrix matrix;
  matrix.policies = policies;
  matrix.episodes = episodes;
  matrix.master_seed = seed;
  matrix.values.resize(static_cast<std::size_t>(policies) * episodes);
  for (int n = 0; n < policies; ++n) {
    Rng rng(derive_seed(seed, stream::synthetic, static_cast<std::uint64_t>(n)));
    const int x = draw(rng, px, 1.0);
    std::vector<double> cond(static_cast<std::size_t>(joint.bins));
    for (int y = 0; y < joint.bins; ++y) cond[static_cast<std::size_t>(y)] = joint.at(x, y);
    const double total = px[static_cast<std::size_t>(x)];
    for (int e = 0; e < episodes; ++e)
      matrix.at(n, e) = static_cast<double>(draw(rng, cond, total));
  }
  return matrix;
}

namespace {

double t_density(double x, double df, double log_norm) {
  return std::exp(log_norm - 0.5 * (df + 1.0) * std::log1p(x * x / df));
}

double adaptive_simpson(double a, double b, double fa, double fm, double fb,
                        double whole, double eps, int depth, double df,
                        double log_norm) {
  const double m = 0.5 * (a + b);
  const double lm = 0.5 * (a + m);
  const double rm = 0.5 * (m + b);
  const double flm = t_density(lm, df, log_norm);
  const double frm = t_density(rm, df, log_norm);
  const double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
  const double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
  const double delta = left + right - whole;
  if (depth <= 0 || std::abs(delta) <= 15.0 * eps)
    return left + right + delta / 15.0;
  return adaptive_simpson(a, m, fa, flm, fm, left, 0.5 * eps, depth - 1, df, log_norm) +
         adaptive_simpson(m, b, fm, frm, fb, right, 0.5 * eps, depth - 1, df, log_norm);
}

}  // namespace

double t_cdf_numeric(double t, double df) {
  if (!(df > 0.0)) throw std::invalid_argument("t_cdf_numeric: df must be > 0");
  if (t == 0.0) return 0.5;
  const double log_norm = std::lgamma(0.5 * (df + 1.0)) - std::lgamma(0.5 * df) -
                          0.5 * std::log(df * 3.14159265358979323846);
  const double hi = std::abs(t);
  const double fa = t_density(0.0, df, log_norm);
  const double fb = t_density(hi, df, log_norm);
  const double fm = t_density(0.5 * hi, df, log_norm);
  const double whole = hi / 6.0 * (fa + 4.0 * fm + fb);
  const double integral =
      adaptive_simpson(0.0, hi, fa, fm, fb, whole, 1e-12, 60, df, log_norm);
  return t > 0.0 ? 0.5 + integral : 0.5 - integral;
}

}  // namespace oracle
}  // namespace rwgc
