#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "hpm/errors.hpp"
#include "hpm/problem.hpp"
#include "hpm/random.hpp"
#include "hpm/rip.hpp"

using namespace hpm;

namespace {

DenseMatrix identity(int d) {
  DenseMatrix I(d, d);
  for (int i = 0; i < d; ++i) I(i, i) = 1.0;
  return I;
}

}  // namespace

TEST_CASE("delta of the identity is zero") {
  const DenseMatrix I = identity(8);
  for (int k = 1; k <= 3; ++k) CHECK(delta_exhaustive(I, k) == doctest::Approx(0.0).scale(1));
}

TEST_CASE("delta_1 of a sqrt(2)-scaled column is 1") {
  DenseMatrix U = identity(4);
  for (int i = 0; i < 4; ++i) U(i, 2) *= std::sqrt(2.0);
  CHECK(delta_exhaustive(U, 1) == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("delta scaling consistency on the one-column example") {
  // scaling U by c multiplies the Gram block by c^2
  DenseMatrix U = identity(3);
  const double c = 1.7;
  for (double& v : U.data) v *= c;
  CHECK(delta_exhaustive(U, 1) == doctest::Approx(c * c - 1.0).epsilon(1e-12));
}

TEST_CASE("delta_exhaustive dominates a random-direction lower-bound oracle") {
  const DenseMatrix U = gen_gaussian_matrix(8, 12, 17);
  const double exact = delta_exhaustive(U, 2);
  // maximize |  ||U_T x||^2 - 1 | over random unit x per support pair
  Rng rng(18);
  double oracle = 0.0;
  for (int a = 0; a < 12; ++a) {
    for (int b = a + 1; b < 12; ++b) {
      for (int trial = 0; trial < 2000; ++trial) {
        double x0 = rng.normal(), x1 = rng.normal();
        const double nrm = std::sqrt(x0 * x0 + x1 * x1);
        x0 /= nrm;
        x1 /= nrm;
        double sq = 0.0;
        for (int i = 0; i < 8; ++i) {
          const double v = U(i, a) * x0 + U(i, b) * x1;
          sq += v * v;
        }
        oracle = std::max(oracle, std::abs(sq - 1.0));
      }
    }
  }
  CHECK(oracle <= exact + 1e-12);
  CHECK(exact - oracle <= 5e-2);
}

TEST_CASE("theta of orthonormal columns is zero") {
  CHECK(theta_exhaustive(identity(12), 2) == doctest::Approx(0.0).scale(1));
}

TEST_CASE("theta at d=2, s=1 is the column inner product") {
  DenseMatrix U(3, 2);
  Rng rng(19);
  for (double& v : U.data) v = rng.normal();
  double ip = 0.0;
  for (int i = 0; i < 3; ++i) ip += U(i, 0) * U(i, 1);
  CHECK(theta_exhaustive(U, 1) == doctest::Approx(std::abs(ip)).epsilon(1e-12));
}

TEST_CASE("random matrices: monotone delta, theta <= delta_2s, permutation invariance") {
  for (uint64_t seed = 0; seed < 10; ++seed) {
    const DenseMatrix U = gen_gaussian_matrix(8, 12, 100 + seed);
    double prev = 0.0;
    std::map<int, double> delta;
    for (int k = 1; k <= 4; ++k) {
      delta[k] = delta_exhaustive(U, k);
      CHECK(delta[k] >= prev - 1e-12);
      prev = delta[k];
    }
    for (int s = 1; s <= 2; ++s)
      CHECK(theta_exhaustive(U, s) <= delta[2 * s] + 1e-10);
    // column permutation leaves delta unchanged
    DenseMatrix P(8, 12);
    for (int i = 0; i < 8; ++i)
      for (int j = 0; j < 12; ++j) P(i, j) = U(i, (j + 5) % 12);
    CHECK(delta_exhaustive(P, 2) == doctest::Approx(delta[2]).epsilon(1e-12));
  }
}

TEST_CASE("enumeration cap produces an explicit error") {
  const DenseMatrix U = gen_gaussian_matrix(4, 30, 1);
  CHECK_THROWS_AS(delta_exhaustive(U, 10, 1000), std::invalid_argument);
  CHECK_THROWS_AS(theta_exhaustive(U, 3, 1000), std::invalid_argument);
}

TEST_CASE("gamma_condition arithmetic") {
  RipConstants id;
  id.delta[2] = 0.0;
  id.delta[6] = 0.0;
  id.theta_ss = 0.0;
  const GammaResult g0 = gamma_condition(id, 2);
  CHECK(g0.gamma == 0.0);
  CHECK(g0.satisfied);

  RipConstants a;
  a.delta[1] = 0.3;
  a.delta[3] = 0.3;
  a.theta_ss = 0.2;
  const GammaResult g1 = gamma_condition(a, 1);
  CHECK(g1.gamma == doctest::Approx(0.3 + 0.2 * std::sqrt(2.0) + 0.3).epsilon(1e-12));
  CHECK(g1.satisfied);

  RipConstants b;
  b.delta[1] = 0.5;
  b.delta[3] = 0.5;
  b.theta_ss = 0.3;
  const GammaResult g2 = gamma_condition(b, 1);
  CHECK(g2.gamma == doctest::Approx(1.0 + 0.3 * std::sqrt(2.0)).epsilon(1e-12));
  CHECK_FALSE(g2.satisfied);

  RipConstants missing;
  missing.delta[1] = 0.1;
  CHECK_THROWS_AS(gamma_condition(missing, 1), ContractViolation);
}

TEST_CASE("ut_e_inf_bound_report") {
  const int d = 16;
  const DenseMatrix I = identity(d);
  SUBCASE("zero noise") {
    const InfBoundReport r = ut_e_inf_bound_report(I, DenseVector(d, 0.0), 1.0, 1.0);
    CHECK(r.actual == 0.0);
    CHECK(r.within);
  }
  SUBCASE("identity with a basis-vector error") {
    DenseVector e(d, 0.0);
    e[0] = 1.0;
    const InfBoundReport r = ut_e_inf_bound_report(I, e, 1.0, 1.0);
    CHECK(r.actual == doctest::Approx(1.0));
    CHECK(r.bound == doctest::Approx(std::sqrt((1.0 + std::log(double(d))) / d)));
  }
  SUBCASE("Monte Carlo acceptance fraction") {
    const int n = 500, dd = 2000, trials = 100;
    int within = 0;
    for (uint64_t t = 0; t < trials; ++t) {
      const DenseMatrix U = gen_gaussian_matrix(n, dd, 500 + t);
      DenseVector e(n);
      Rng rng(900 + t);
      for (double& v : e) v = rng.normal();
      if (ut_e_inf_bound_report(U, e, 2.0, 3.0).within) ++within;
    }
    CHECK(static_cast<double>(within) / trials >= 1.0 - 2.0 * std::exp(-3.0) - 0.05);
  }
}

TEST_CASE("low-coherence frame has unit columns and beats a random frame") {
  const int n = 10, d = 14;
  const DenseMatrix F = gen_low_coherence_frame(n, d, 0, 300);
  double mu = 0.0;
  for (int a = 0; a < d; ++a) {
    double sq = 0.0;
    for (int i = 0; i < n; ++i) sq += F(i, a) * F(i, a);
    CHECK(sq == doctest::Approx(1.0).epsilon(1e-9));
    for (int b = a + 1; b < d; ++b) {
      double ip = 0.0;
      for (int i = 0; i < n; ++i) ip += F(i, a) * F(i, b);
      mu = std::max(mu, std::abs(ip));
    }
  }
  // random unit-column Gaussian coherence at this size is typically > 0.5
  CHECK(mu < 0.45);
  CHECK(F.data == gen_low_coherence_frame(n, d, 0, 300).data);
}
