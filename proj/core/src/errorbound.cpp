#include "rwgc/errorbound.hpp"

#include <algorithm>
#include <cmath>
#include <mutex>
#include <stdexcept>
#include <vector>

#include "rwgc/parallel.hpp"
#include "rwgc/rng.hpp"

namespace rwgc {

namespace {
constexpr double pi = 3.14159265358979323846;
}

std::vector<Vec2> jacobian(const ArmTask& task, std::span<const double> q) {
  const int n = task.dof();
  if (static_cast<int>(q.size()) != n)
    throw std::invalid_argument("jacobian: q length != dof");

  // Cumulative angles and per-link direction vectors.
  std::vector<double> cum(static_cast<std::size_t>(n));
  double angle = 0.0;
  for (int i = 0; i < n; ++i) {
    angle += q[static_cast<std::size_t>(i)];
    cum[static_cast<std::size_t>(i)] = angle;
  }

  std::vector<Vec2> cols(static_cast<std::size_t>(n));
  for (int k = 0; k < n; ++k) {
    double sx = 0.0, sy = 0.0;
    for (int i = k; i < n; ++i) {
      sx += task.link_lengths[static_cast<std::size_t>(i)] * std::sin(cum[static_cast<std::size_t>(i)]);
      sy += task.link_lengths[static_cast<std::size_t>(i)] * std::cos(cum[static_cast<std::size_t>(i)]);
    }
    cols[static_cast<std::size_t>(k)] = {-sx, sy};
  }
  return cols;
}

double error_bound(const ArmTask& task, double epsilon) {
  if (!(epsilon > 0.0)) throw std::invalid_argument("error_bound: epsilon must be > 0");
  double sum = 0.0;
  for (int i = 0; i < task.dof(); ++i)
    sum += (i + 1) * task.link_lengths[static_cast<std::size_t>(i)];
  return epsilon * sum;
}

BoundReport verify_bound(const ArmTask& task, double epsilon, long long samples,
                         std::uint64_t seed, int threads) {
  if (samples < 1) throw std::invalid_argument("verify_bound: samples must be >= 1");
  const int n = task.dof();

  BoundReport report;
  report.dof = n;
  report.lengths = task.link_lengths;
  report.epsilon = epsilon;
  report.bound = error_bound(task, epsilon);
  report.samples = samples;
  report.seed = seed;
  report.exact_slack = n * task.total_length() * epsilon * epsilon / 2.0;

  struct Partial {
    double max_first = 0.0;
    double max_exact = 0.0;
    long long first_violations = 0;
    long long exact_violations = 0;
  };

  // max and integer sums merge exactly in any order, so the reduction is
  // thread-count independent.
  std::mutex merge_mutex;

  parallel_for(0, samples, threads, [&](std::int64_t lo, std::int64_t hi) {
    Partial local;
    std::vector<double> q(static_cast<std::size_t>(n));
    std::vector<double> dq(static_cast<std::size_t>(n));
    std::vector<double> q_pert(static_cast<std::size_t>(n));
    for (std::int64_t s = lo; s < hi; ++s) {
      // Per-sample stream: the sample set is fixed for any partition.
      Rng rng(derive_seed(seed, stream::bound_check, static_cast<std::uint64_t>(s)));
      for (int i = 0; i < n; ++i) {
        q[static_cast<std::size_t>(i)] = rng.next_uniform(-pi, pi);
        dq[static_cast<std::size_t>(i)] = rng.next_uniform(-epsilon, epsilon);
        q_pert[static_cast<std::size_t>(i)] = q[static_cast<std::size_t>(i)] + dq[static_cast<std::size_t>(i)];
      }
      const auto cols = jacobian(task, q);
      double jx = 0.0, jy = 0.0;
      for (int k = 0; k < n; ++k) {
        jx += cols[static_cast<std::size_t>(k)].x * dq[static_cast<std::size_t>(k)];
        jy += cols[static_cast<std::size_t>(k)].y * dq[static_cast<std::size_t>(k)];
      }
      const double first = std::hypot(jx, jy);
      const Vec2 base = forward_kinematics(task, q);
      const Vec2 moved = forward_kinematics(task, q_pert);
      const double exact = distance(base, moved);

      local.max_first = std::max(local.max_first, first);
      local.max_exact = std::max(local.max_exact, exact);
      if (first > report.bound) ++local.first_violations;
      if (exact > report.bound + report.exact_slack) ++local.exact_violations;
    }
    std::lock_guard<std::mutex> lock(merge_mutex);
    report.max_first_order = std::max(report.max_first_order, local.max_first);
    report.max_exact = std::max(report.max_exact, local.max_exact);
    report.first_order_violations += local.first_violations;
    report.exact_violations += local.exact_violations;
  });
  return report;
}

}  // namespace rwgc
