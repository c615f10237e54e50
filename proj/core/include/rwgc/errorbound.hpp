#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "rwgc/dynamics.hpp"

namespace rwgc {

// Planar-chain Jacobian columns: column k is the derivative of the
// end-effector position with respect to joint k (0-based).
std::vector<Vec2> jacobian(const ArmTask& task, std::span<const double> q);

// Worst-case end-effector error for joint errors bounded by epsilon:
// epsilon * sum_i i * l_i with 1-based link index.
double error_bound(const ArmTask& task, double epsilon);

struct BoundReport {
  int dof = 0;
  std::vector<double> lengths;
  double epsilon = 0.0;
  double bound = 0.0;               // epsilon * sum i*l_i
  long long samples = 0;
  double max_first_order = 0.0;     // max ||J dq|| observed
  double max_exact = 0.0;           // max ||FK(q+dq) - FK(q)|| observed
  long long first_order_violations = 0;  // must be 0
  long long exact_violations = 0;        // exact above bound + slack
  double exact_slack = 0.0;         // n * (sum l) * eps^2 / 2 second-order allowance
  std::uint64_t seed = 0;
};

// Monte-Carlo check of the bound: random configurations q ~ U(-pi,pi)^n and
// perturbations with |dq_i| <= epsilon. The linearised error can never
// exceed the bound; the exact displacement gets the quadratic slack.
BoundReport verify_bound(const ArmTask& task, double epsilon, long long samples,
                         std::uint64_t seed, int threads = 0);

}  // namespace rwgc
