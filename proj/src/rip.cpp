#include "hpm/rip.hpp"

#include <Eigen/Dense>
#include <cmath>
#include <numeric>
#include <string>

#include "hpm/errors.hpp"
#include "hpm/random.hpp"

namespace hpm {

namespace {

// C(n, k), clamped so it never overflows past the comparison range.
long long binomial_clamped(int n, int k, long long clamp) {
  if (k < 0 || k > n) return 0;
  long long c = 1;
  for (int i = 1; i <= k; ++i) {
    c = c * (n - k + i) / i;
    if (c > clamp) return clamp + 1;
  }
  return c;
}

bool next_combination(std::vector<int>& comb, int n) {
  const int k = static_cast<int>(comb.size());
  for (int i = k - 1; i >= 0; --i) {
    if (comb[i] < n - k + i) {
      ++comb[i];
      for (int j = i + 1; j < k; ++j) comb[j] = comb[j - 1] + 1;
      return true;
    }
  }
  return false;
}

Eigen::MatrixXd gram(const DenseMatrix& U) {
  Eigen::Map<const Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic,
                                 Eigen::RowMajor>>
      M(U.data.data(), U.rows, U.cols);
  return M.transpose() * M;
}

}  // namespace

double delta_exhaustive(const DenseMatrix& U, int k, long long cap) {
  validate_finite(U, "delta_exhaustive");
  const int d = U.cols;
  if (k < 1 || k > d) throw std::invalid_argument("delta_exhaustive: k out of range");
  if (binomial_clamped(d, k, cap) > cap)
    throw std::invalid_argument(
        "delta_exhaustive: C(d, k) exceeds the enumeration cap of " +
        std::to_string(cap) + " supports; shrink d or k");
  const Eigen::MatrixXd G = gram(U);
  Eigen::MatrixXd block(k, k);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es;
  std::vector<int> T(k);
  std::iota(T.begin(), T.end(), 0);
  double worst = 0.0;
  do {
    for (int a = 0; a < k; ++a)
      for (int b = 0; b < k; ++b) block(a, b) = G(T[a], T[b]);
    es.compute(block, Eigen::EigenvaluesOnly);
    const double lo = es.eigenvalues()(0);
    const double hi = es.eigenvalues()(k - 1);
    worst = std::max({worst, std::abs(hi - 1.0), std::abs(1.0 - lo)});
  } while (next_combination(T, d));
  return worst;
}

double theta_exhaustive(const DenseMatrix& U, int s, long long cap) {
  validate_finite(U, "theta_exhaustive");
  const int d = U.cols;
  if (s < 1 || 2 * s > d) throw std::invalid_argument("theta_exhaustive: need 2s <= d");
  const long long pairs =
      binomial_clamped(d, s, cap) > cap
          ? cap + 1
          : binomial_clamped(d, s, cap) * binomial_clamped(d - s, s, cap);
  if (pairs > cap)
    throw std::invalid_argument(
        "theta_exhaustive: support-pair count exceeds the enumeration cap of " +
        std::to_string(cap) + "; shrink d or s");
  const Eigen::MatrixXd G = gram(U);
  Eigen::MatrixXd block(s, s);
  std::vector<int> T(s);
  std::iota(T.begin(), T.end(), 0);
  double worst = 0.0;
  do {
    std::vector<bool> in_T(d, false);
    for (int i : T) in_T[i] = true;
    std::vector<int> rest;
    rest.reserve(d - s);
    for (int i = 0; i < d; ++i)
      if (!in_T[i]) rest.push_back(i);
    std::vector<int> P(s);
    std::iota(P.begin(), P.end(), 0);
    do {
      for (int a = 0; a < s; ++a)
        for (int b = 0; b < s; ++b) block(a, b) = G(T[a], rest[P[b]]);
      const double sv = block.jacobiSvd().singularValues()(0);
      worst = std::max(worst, sv);
    } while (next_combination(P, d - s));
  } while (next_combination(T, d));
  return worst;
}

GammaResult gamma_condition(const RipConstants& c, int s) {
  const auto ds = c.delta.find(s);
  const auto d3s = c.delta.find(3 * s);
  if (ds == c.delta.end() || d3s == c.delta.end())
    throw ContractViolation("gamma_condition: delta_s and delta_3s must both be present");
  GammaResult r;
  r.gamma = ds->second + std::sqrt(2.0) * c.theta_ss + d3s->second;
  r.satisfied = r.gamma < 1.0;
  return r;
}

InfBoundReport ut_e_inf_bound_report(const DenseMatrix& U, const DenseVector& e,
                                     double theta_const, double tau) {
  if (static_cast<int>(e.size()) != U.rows)
    throw std::invalid_argument("ut_e_inf_bound_report: e.length != U.rows");
  if (theta_const <= 0.0 || tau <= 0.0)
    throw std::invalid_argument("ut_e_inf_bound_report: theta_const and tau must be > 0");
  InfBoundReport r;
  r.actual = norms(matvec_transpose(U, e)).linf;
  r.bound = theta_const * norm2(e) *
            std::sqrt((tau + std::log(static_cast<double>(U.cols))) / U.rows);
  r.within = r.actual <= r.bound;
  return r;
}

RipConstants compute_rip_constants(const DenseMatrix& U, int s, long long cap) {
  if (s < 1 || 3 * s > U.cols)
    throw std::invalid_argument("compute_rip_constants: need 3s <= d");
  RipConstants c;
  c.s = s;
  for (int k = 1; k <= 3 * s; ++k) c.delta[k] = delta_exhaustive(U, k, cap);
  c.theta_ss = theta_exhaustive(U, s, cap);
  return c;
}

DenseMatrix gen_low_coherence_frame(int n, int d, uint64_t seed, int iters) {
  if (n < 2 || d <= n) throw std::invalid_argument("gen_low_coherence_frame: need 2 <= n < d");
  Rng rng(seed);
  Eigen::MatrixXd A(d, d);
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j) A(i, j) = rng.normal();
  Eigen::HouseholderQR<Eigen::MatrixXd> qr(A);
  Eigen::MatrixXd Q = qr.householderQ() * Eigen::MatrixXd::Identity(d, d);
  Eigen::MatrixXd M = Q.topRows(n);
  for (int j = 0; j < d; ++j) M.col(j).normalize();

  const double welch = std::sqrt((d - n) / (static_cast<double>(n) * (d - 1)));
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es;
  for (int it = 0; it < iters; ++it) {
    Eigen::MatrixXd G = M.transpose() * M;
    double mu = 0.0;
    for (int i = 0; i < d; ++i)
      for (int j = 0; j < d; ++j)
        if (i != j) mu = std::max(mu, std::abs(G(i, j)));
    const double tgt = std::max(welch, 0.95 * mu);
    for (int i = 0; i < d; ++i)
      for (int j = 0; j < d; ++j)
        if (i != j) G(i, j) = std::clamp(G(i, j), -tgt, tgt);
    es.compute(G);
    // rank-n factor from the top-n eigenpairs
    for (int r = 0; r < n; ++r) {
      const int k = d - n + r;
      const double w = std::sqrt(std::max(es.eigenvalues()(k), 0.0));
      M.row(r) = w * es.eigenvectors().col(k).transpose();
    }
    for (int j = 0; j < d; ++j) M.col(j).normalize();
  }

  DenseMatrix U(n, d);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < d; ++j) U(i, j) = M(i, j);
  return U;
}

}  // namespace hpm
