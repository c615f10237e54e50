#pragma once

#include <cstdint>
#include <vector>

#include "rwgc/rwg.hpp"

namespace rwgc {
// Brute-force references for the estimators and the t-distribution numerics.
// Deliberately independent of the metrics/stats implementations: nothing in
// here shares code with the paths it is used to check.
namespace oracle {

// Joint distribution over (policy symbol, return bin), row-major.
struct DiscreteJoint {
  int symbols = 0;
  int bins = 0;
  std::vector<double> p;

  double at(int x, int y) const { return p[static_cast<std::size_t>(x) * bins + y]; }
  void validate() const;

  static DiscreteJoint independent(std::vector<double> px, std::vector<double> py);
  static DiscreteJoint diagonal(int k);  // uniform mass on the diagonal
};

// I(X;Y) = sum p(x,y) log(p(x,y) / (p(x) p(y))), nats.
double exact_mi(const DiscreteJoint& joint);

struct JointEntropies {
  double hx = 0.0;
  double hy = 0.0;
  double hxy = 0.0;
};
JointEntropies exact_entropies(const DiscreteJoint& joint);

// Synthetic return matrix: row n draws a policy symbol from p(x), then M
// returns from p(y | x), stored as the bin index value. Feeding this to the
// plug-in estimators lets them be compared against exact_mi.
ReturnMatrix sample_matrix(const DiscreteJoint& joint, int policies, int episodes,
                           std::uint64_t seed);

// Student-t CDF by adaptive quadrature of the density, <= 1e-10 absolute.
double t_cdf_numeric(double t, double df);

}  // namespace oracle
}  // namespace rwgc
