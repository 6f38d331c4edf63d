#pragma once

#include <optional>

#include "hpm/linalg.hpp"
#include "hpm/rip.hpp"
#include "hpm/solvers.hpp"

namespace hpm {

struct RecoveryReport {
  double full_error = 0.0;            // ||x_hat - x_star||_2
  double top_s_error = 0.0;           // ||x_hat - x_star^s||_2
  double top_s_projected_error = 0.0; // ||x_hat^s - x_star^s||_2
  int support_excess = 0;             // |S(x_hat) \ S(x_star^s)|
  long long nnz = 0;
  std::optional<double> rate_estimate;
};

RecoveryReport recovery_report(const DenseVector& x_hat, const DenseVector& x_star, int s);

// Least-squares slope of log ||x_t - x_ref||_2 versus t over iterations whose
// error exceeds `floor`, returned as the per-iteration factor e^slope
// (natural log throughout). Needs at least 5 usable points.
double fit_linear_rate(const IterateTrace& trace, const DenseVector& x_ref, double floor);

struct LemmaCheck {
  bool holds = false;
  double slack = 0.0;  // rhs - lhs
};

// Fundamental per-step inequality of the homotopy proximal update:
// ||x_next - x_ref||^2 <= lambda_t sqrt(s) ||x_next - x_ref||
//                         + |(x_next - x_ref)^T (U^T(U x_t - y) - (x_t - x_ref))|
// with 1e-9 absolute slack. x_ref must be s-sparse.
LemmaCheck check_lemma_fund(const DenseMatrix& U, const DenseVector& y,
                            const DenseVector& x_t, const DenseVector& x_next,
                            double lambda_t, const DenseVector& x_ref, int s);

// ||x^s - y_sparse||_2 <= sqrt(3) ||x - y_sparse||_2 for length-2s vectors
// with y_sparse at most s-sparse.
bool check_top_s_lemma(const DenseVector& x, const DenseVector& y_sparse, int s);

struct Prop1Result {
  int count = 0;
  bool holds = false;
};

// Counts entries of [x_t - U^T U (x_t - x_star)] off the true support whose
// magnitude exceeds (delta_s + sqrt(2) theta_ss)/sqrt(s) * ||x_t - x_star||_2;
// the bound says at most s such entries exist. Requires the hypothesis
// |S(x_t) \ S_star| <= s.
Prop1Result check_prop1_count(const DenseMatrix& U, const DenseVector& x_t,
                              const DenseVector& x_star, const RipConstants& rip, int s);

}  // namespace hpm
