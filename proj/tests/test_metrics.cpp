#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "hpm/metrics.hpp"
#include "hpm/problem.hpp"
#include "hpm/random.hpp"

using namespace hpm;

namespace {

IterateTrace synthetic_trace(const std::vector<double>& errors, const DenseVector& x_ref) {
  // errors realized along the first coordinate axis relative to x_ref
  IterateTrace t;
  t.d = static_cast<int>(x_ref.size());
  for (size_t i = 0; i < errors.size(); ++i) {
    IterRecord r;
    r.t = static_cast<int>(i) + 1;
    DenseVector x = x_ref;
    x[0] += errors[i];
    r.sparse_snapshot = false;
    r.snap_values = x;
    r.nnz = static_cast<int>(norms(x).l0);
    t.records.push_back(r);
  }
  return t;
}

}  // namespace

TEST_CASE("recovery_report basics") {
  DenseVector x_star{0.0, 1.0, 0.0, -2.0, 0.5};
  SUBCASE("exact match") {
    const RecoveryReport r = recovery_report(x_star, x_star, 3);
    CHECK(r.full_error == 0.0);
    CHECK(r.top_s_error == 0.0);
    CHECK(r.top_s_projected_error == 0.0);
    CHECK(r.support_excess == 0);
    CHECK(r.nnz == 3);
  }
  SUBCASE("zero estimate") {
    const RecoveryReport r = recovery_report(DenseVector(5, 0.0), x_star, 3);
    CHECK(r.full_error == doctest::Approx(norm2(x_star)).epsilon(1e-14));
    CHECK(r.nnz == 0);
  }
  SUBCASE("random pair matches hand recomposition") {
    Rng rng(1);
    DenseVector x_hat(5);
    for (double& v : x_hat) v = rng.uniform(-1, 1);
    const RecoveryReport r = recovery_report(x_hat, x_star, 2);
    const DenseVector x_top = hard_threshold_top_s(x_star, 2);
    CHECK(r.full_error == doctest::Approx(norm2(sub(x_hat, x_star))).epsilon(1e-14));
    CHECK(r.top_s_error == doctest::Approx(norm2(sub(x_hat, x_top))).epsilon(1e-14));
    CHECK(r.top_s_projected_error ==
          doctest::Approx(norm2(sub(hard_threshold_top_s(x_hat, 2), x_top))).epsilon(1e-14));
    CHECK(r.support_excess ==
          set_difference_size(support(x_hat), support(x_top)));
  }
  SUBCASE("dimension mismatch") {
    CHECK_THROWS_AS(recovery_report(DenseVector(4, 0.0), x_star, 2),
                    std::invalid_argument);
  }
}

TEST_CASE("projected top-s error obeys the sqrt(3) factor at 2s-sparse differences") {
  Rng rng(2);
  for (int rep = 0; rep < 500; ++rep) {
    const int s = 1 + static_cast<int>(rng.below(4));
    DenseVector x_star(6 * s, 0.0), x_hat(6 * s, 0.0);
    for (int i = 0; i < s; ++i) x_star[i] = rng.uniform(-2, 2);
    // x_hat differs from x_star^s on at most 2s coordinates
    for (int i = 0; i < 2 * s; ++i) x_hat[i] = rng.uniform(-2, 2);
    const RecoveryReport r = recovery_report(x_hat, x_star, s);
    CHECK(r.top_s_projected_error <= std::sqrt(3.0) * r.top_s_error + 1e-12);
  }
}

TEST_CASE("fit_linear_rate") {
  const DenseVector x_ref(4, 0.0);
  SUBCASE("exact geometric sequence") {
    std::vector<double> errs;
    for (int t = 0; t < 20; ++t) errs.push_back(std::pow(0.5, t));
    CHECK(fit_linear_rate(synthetic_trace(errs, x_ref), x_ref, 1e-12) ==
          doctest::Approx(0.5).epsilon(1e-10));
  }
  SUBCASE("constant sequence gives 1") {
    CHECK(fit_linear_rate(synthetic_trace(std::vector<double>(10, 0.3), x_ref), x_ref,
                          1e-12) == doctest::Approx(1.0).epsilon(1e-12));
  }
  SUBCASE("scale invariance") {
    std::vector<double> a, b;
    Rng rng(3);
    double e = 1.0;
    for (int t = 0; t < 15; ++t) {
      e *= rng.uniform(0.4, 0.8);
      a.push_back(e);
      b.push_back(123.456 * e);
    }
    const double ra = fit_linear_rate(synthetic_trace(a, x_ref), x_ref, 1e-15);
    const double rb = fit_linear_rate(synthetic_trace(b, x_ref), x_ref, 1e-12);
    CHECK(ra == doctest::Approx(rb).epsilon(1e-12));
  }
  SUBCASE("too few usable points") {
    CHECK_THROWS_AS(fit_linear_rate(synthetic_trace({1.0, 0.5, 0.25}, x_ref), x_ref, 1e-12),
                    std::invalid_argument);
    CHECK_THROWS_AS(fit_linear_rate(synthetic_trace({1, 0.1, 1e-13, 1e-13, 1e-13, 1e-13},
                                                    x_ref),
                                    x_ref, 1e-12),
                    std::invalid_argument);
  }
}

TEST_CASE("fundamental-step checker") {
  const DenseMatrix U = gen_gaussian_matrix(6, 10, 5);
  const DenseVector x_ref = gen_signal(10, SignalKind::exact_sparse(2), 6);
  const DenseVector y = matvec(U, x_ref);
  SUBCASE("x_next equal to x_ref holds trivially") {
    const DenseVector x_t = gen_signal(10, SignalKind::exact_sparse(4), 7);
    const LemmaCheck c = check_lemma_fund(U, y, x_t, x_ref, 0.1, x_ref, 2);
    CHECK(c.holds);
    CHECK(c.slack >= 0.0);
  }
  SUBCASE("x_ref sparsity precondition") {
    const DenseVector dense = gen_signal(10, SignalKind::power_law(), 0);
    CHECK_THROWS_AS(check_lemma_fund(U, y, x_ref, x_ref, 0.1, dense, 2),
                    std::invalid_argument);
  }
  SUBCASE("constructed violation is reported") {
    // d = 2 identity system: pick x_next far from the prox solution along a
    // direction that the inner-product term cannot absorb
    DenseMatrix I(2, 2);
    I(0, 0) = I(1, 1) = 1.0;
    const DenseVector ref{1.0, 0.0};
    const DenseVector y2{1.0, 0.0};
    const DenseVector x_t{1.0, 0.0};  // gradient term vanishes: U^T(Ux-y) = x - ref
    const DenseVector bad{1.0, 5.0};  // offset orthogonal to (x_t - ref)
    const LemmaCheck c = check_lemma_fund(I, y2, x_t, bad, 1e-6, ref, 1);
    CHECK_FALSE(c.holds);
  }
}

TEST_CASE("top-s projection bound") {
  SUBCASE("already s-sparse x") {
    const DenseVector x{0.5, 0.0, 0.0, 0.0};
    const DenseVector y{0.2, 0.1, 0.0, 0.0};
    CHECK(check_top_s_lemma(x, y, 2));
  }
  SUBCASE("x equal to y") {
    const DenseVector v{0.3, -0.2, 0.0, 0.0};
    CHECK(check_top_s_lemma(v, v, 2));
  }
  SUBCASE("randomized sweep has zero violations") {
    Rng rng(8);
    for (int rep = 0; rep < 10000; ++rep) {
      const int s = 1 + static_cast<int>(rng.below(5));
      DenseVector x(2 * s), y(2 * s, 0.0);
      for (double& v : x) v = rng.uniform(-3, 3);
      for (int i = 0; i < s; ++i)
        y[rng.below(static_cast<uint64_t>(2 * s))] = rng.uniform(-3, 3);
      CHECK(check_top_s_lemma(x, y, s));
    }
  }
  SUBCASE("precondition violations") {
    CHECK_THROWS_AS(check_top_s_lemma(DenseVector(3, 1.0), DenseVector(3, 0.0), 2),
                    std::invalid_argument);
    CHECK_THROWS_AS(check_top_s_lemma(DenseVector(4, 1.0), DenseVector{1, 1, 1, 0}, 2),
                    std::invalid_argument);
  }
}

TEST_CASE("off-support magnitude counter") {
  const int d = 12;
  DenseMatrix I(d, d);
  for (int i = 0; i < d; ++i) I(i, i) = 1.0;
  RipConstants rip;
  rip.delta[2] = 0.0;
  rip.theta_ss = 0.0;
  rip.s = 2;
  DenseVector x_star(d, 0.0);
  x_star[1] = 1.0;
  x_star[5] = -0.5;
  SUBCASE("x_t equal to x_star counts zero") {
    const Prop1Result r = check_prop1_count(I, x_star, x_star, rip, 2);
    CHECK(r.count == 0);
    CHECK(r.holds);
  }
  SUBCASE("identity matrix keeps the correction exact") {
    DenseVector x_t = x_star;
    x_t[3] = 0.2;
    x_t[7] = -0.1;
    const Prop1Result r = check_prop1_count(I, x_t, x_star, rip, 2);
    CHECK(r.count == 0);
    CHECK(r.holds);
  }
  SUBCASE("hypothesis violation raises") {
    DenseVector x_t = x_star;
    x_t[2] = x_t[3] = x_t[4] = 0.3;
    CHECK_THROWS_AS(check_prop1_count(I, x_t, x_star, rip, 2), std::invalid_argument);
  }
}
