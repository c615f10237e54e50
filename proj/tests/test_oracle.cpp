#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "rwgc/oracle.hpp"
#include "rwgc/rng.hpp"

using namespace rwgc;
using oracle::DiscreteJoint;

namespace {
constexpr double ln2 = 0.6931471805599453;
}

TEST_CASE("exact_mi on a product joint is zero") {
  const auto joint = DiscreteJoint::independent({0.3, 0.7}, {0.2, 0.5, 0.3});
  CHECK(oracle::exact_mi(joint) == doctest::Approx(0.0).epsilon(1e-14));
}

TEST_CASE("exact_mi on perfectly correlated joints") {
  CHECK(oracle::exact_mi(DiscreteJoint::diagonal(2)) == doctest::Approx(ln2));
  CHECK(oracle::exact_mi(DiscreteJoint::diagonal(4)) == doctest::Approx(std::log(4.0)));
}

TEST_CASE("exact_mi equals H(X) + H(Y) - H(X,Y) on random joints") {
  Rng rng(11);
  for (int trial = 0; trial < 1000; ++trial) {
    const int nx = 2 + static_cast<int>(rng.next_below(4));
    const int ny = 2 + static_cast<int>(rng.next_below(5));
    DiscreteJoint joint;
    joint.symbols = nx;
    joint.bins = ny;
    joint.p.resize(static_cast<std::size_t>(nx) * ny);
    double sum = 0.0;
    for (auto& v : joint.p) {
      v = rng.next_double() + 1e-6;
      sum += v;
    }
    for (auto& v : joint.p) v /= sum;
    const double mi = oracle::exact_mi(joint);
    const auto h = oracle::exact_entropies(joint);
    CHECK(mi >= -1e-12);
    CHECK(mi == doctest::Approx(h.hx + h.hy - h.hxy).epsilon(1e-10));
  }
}

TEST_CASE("sample_matrix is deterministic and in range") {
  const auto joint = DiscreteJoint::diagonal(3);
  const auto a = oracle::sample_matrix(joint, 50, 20, 99);
  const auto b = oracle::sample_matrix(joint, 50, 20, 99);
  CHECK(a.values == b.values);
  for (double v : a.values) {
    CHECK(v >= 0.0);
    CHECK(v <= 2.0);
  }
}

TEST_CASE("t_cdf_numeric basics") {
  CHECK(oracle::t_cdf_numeric(0.0, 5.0) == doctest::Approx(0.5).epsilon(1e-12));
  // Cauchy closed form: F(1) = 1/2 + atan(1)/pi = 3/4.
  CHECK(oracle::t_cdf_numeric(1.0, 1.0) == doctest::Approx(0.75).epsilon(1e-10));
  CHECK(oracle::t_cdf_numeric(60.0, 5.0) == doctest::Approx(1.0).epsilon(1e-7));
}

TEST_CASE("t_cdf_numeric symmetry F(-t) = 1 - F(t)") {
  Rng rng(7);
  for (int trial = 0; trial < 1000; ++trial) {
    const double t = rng.next_uniform(-10.0, 10.0);
    const double df = rng.next_uniform(0.5, 120.0);
    const double f_pos = oracle::t_cdf_numeric(t, df);
    const double f_neg = oracle::t_cdf_numeric(-t, df);
    CHECK(f_pos + f_neg == doctest::Approx(1.0).epsilon(1e-10));
  }
}

TEST_CASE("joint validation rejects bad tables") {
  DiscreteJoint joint;
  joint.symbols = 2;
  joint.bins = 2;
  joint.p = {0.5, 0.5, 0.5, 0.5};  // sums to 2
  CHECK_THROWS_AS(joint.validate(), std::invalid_argument);
  joint.p = {0.6, 0.5, -0.1, 0.0};
  CHECK_THROWS_AS(joint.validate(), std::invalid_argument);
}
