#include "hpm/metrics.hpp"

#include <cmath>
#include <stdexcept>

namespace hpm {

RecoveryReport recovery_report(const DenseVector& x_hat, const DenseVector& x_star, int s) {
  if (x_hat.size() != x_star.size())
    throw std::invalid_argument("recovery_report: length mismatch");
  if (s < 1 || s > static_cast<int>(x_star.size()))
    throw std::invalid_argument("recovery_report: s out of range");
  RecoveryReport r;
  const DenseVector x_top = hard_threshold_top_s(x_star, s);
  const SupportSet s_star = support(x_top);
  r.full_error = norm2(sub(x_hat, x_star));
  r.top_s_error = norm2(sub(x_hat, x_top));
  r.top_s_projected_error = norm2(sub(hard_threshold_top_s(x_hat, s), x_top));
  r.support_excess = set_difference_size(support(x_hat), s_star);
  r.nnz = norms(x_hat).l0;
  return r;
}

double fit_linear_rate(const IterateTrace& trace, const DenseVector& x_ref, double floor) {
  std::vector<double> ts, logs;
  for (size_t i = 0; i < trace.records.size(); ++i) {
    const double err = norm2(sub(trace.iterate(i), x_ref));
    if (err > floor) {
      ts.push_back(static_cast<double>(trace.records[i].t));
      logs.push_back(std::log(err));
    }
  }
  if (ts.size() < 5)
    throw std::invalid_argument("fit_linear_rate: fewer than 5 iterations above the floor");
  const size_t m = ts.size();
  double mt = 0.0, ml = 0.0;
  for (size_t i = 0; i < m; ++i) {
    mt += ts[i];
    ml += logs[i];
  }
  mt /= m;
  ml /= m;
  double num = 0.0, den = 0.0;
  for (size_t i = 0; i < m; ++i) {
    num += (ts[i] - mt) * (logs[i] - ml);
    den += (ts[i] - mt) * (ts[i] - mt);
  }
  return std::exp(num / den);
}

LemmaCheck check_lemma_fund(const DenseMatrix& U, const DenseVector& y,
                            const DenseVector& x_t, const DenseVector& x_next,
                            double lambda_t, const DenseVector& x_ref, int s) {
  if (norms(x_ref).l0 > s)
    throw std::invalid_argument("check_lemma_fund: x_ref is not s-sparse");
  const DenseVector diff = sub(x_next, x_ref);
  const double dist = norm2(diff);
  DenseVector r = matvec(U, x_t);
  for (size_t i = 0; i < r.size(); ++i) r[i] -= y[i];
  const DenseVector g = matvec_transpose(U, r);
  DenseVector inner(x_t.size());
  for (size_t i = 0; i < inner.size(); ++i) inner[i] = g[i] - (x_t[i] - x_ref[i]);
  const double lhs = dist * dist;
  const double rhs = lambda_t * std::sqrt(static_cast<double>(s)) * dist +
                     std::abs(dot(diff, inner));
  LemmaCheck c;
  c.slack = rhs - lhs;
  c.holds = lhs <= rhs + 1e-9;
  return c;
}

bool check_top_s_lemma(const DenseVector& x, const DenseVector& y_sparse, int s) {
  if (s < 1) throw std::invalid_argument("check_top_s_lemma: s must be >= 1");
  if (x.size() != static_cast<size_t>(2 * s) || y_sparse.size() != static_cast<size_t>(2 * s))
    throw std::invalid_argument("check_top_s_lemma: vectors must have length 2s");
  if (norms(y_sparse).l0 > s)
    throw std::invalid_argument("check_top_s_lemma: y_sparse is not s-sparse");
  const double lhs = norm2(sub(hard_threshold_top_s(x, s), y_sparse));
  const double rhs = std::sqrt(3.0) * norm2(sub(x, y_sparse));
  return lhs <= rhs + 1e-12;
}

Prop1Result check_prop1_count(const DenseMatrix& U, const DenseVector& x_t,
                              const DenseVector& x_star, const RipConstants& rip, int s) {
  if (x_t.size() != x_star.size())
    throw std::invalid_argument("check_prop1_count: length mismatch");
  const SupportSet s_star = support(x_star);
  if (set_difference_size(support(x_t), s_star) > s)
    throw std::invalid_argument(
        "check_prop1_count: hypothesis |S(x_t) \\ S_star| <= s violated; checker inapplicable");
  const auto it = rip.delta.find(s);
  if (it == rip.delta.end())
    throw std::invalid_argument("check_prop1_count: delta_s missing from RIP constants");

  const DenseVector diff = sub(x_t, x_star);
  const DenseVector corr = matvec_transpose(U, matvec(U, diff));
  DenseVector x_tilde(x_t.size());
  for (size_t i = 0; i < x_t.size(); ++i) x_tilde[i] = x_t[i] - corr[i];

  const double threshold =
      (it->second + std::sqrt(2.0) * rip.theta_ss) / std::sqrt(static_cast<double>(s)) *
      norm2(diff);
  std::vector<bool> on_support(x_t.size(), false);
  for (int i : s_star) on_support[i] = true;
  Prop1Result res;
  for (size_t i = 0; i < x_t.size(); ++i)
    if (!on_support[i] && std::abs(x_tilde[i]) > threshold) ++res.count;
  res.holds = res.count <= s;
  return res;
}

}  // namespace hpm
