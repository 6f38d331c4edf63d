#include "hpm/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace hpm {

void validate_finite(const DenseVector& v, const std::string& what) {
  if (v.empty()) throw std::invalid_argument(what + ": length must be > 0");
  for (double x : v)
    if (!std::isfinite(x)) throw std::invalid_argument(what + ": non-finite entry");
}

void validate_finite(const DenseMatrix& m, const std::string& what) {
  if (m.rows < 1 || m.cols < 1) throw std::invalid_argument(what + ": empty matrix");
  for (double x : m.data)
    if (!std::isfinite(x)) throw std::invalid_argument(what + ": non-finite entry");
}

DenseVector matvec(const DenseMatrix& U, const DenseVector& x) {
  if (static_cast<int>(x.size()) != U.cols)
    throw std::invalid_argument("matvec: x.length != U.cols");
  DenseVector y(U.rows, 0.0);
  for (int i = 0; i < U.rows; ++i) {
    const double* row = &U.data[static_cast<size_t>(i) * U.cols];
    double acc = 0.0;
    for (int j = 0; j < U.cols; ++j) acc += row[j] * x[j];
    y[i] = acc;
  }
  return y;
}

DenseVector matvec_transpose(const DenseMatrix& U, const DenseVector& r) {
  if (static_cast<int>(r.size()) != U.rows)
    throw std::invalid_argument("matvec_transpose: r.length != U.rows");
  DenseVector z(U.cols, 0.0);
  // Row-major: accumulate row i of U scaled by r_i. Fixed loop order keeps
  // results bitwise-deterministic.
  for (int i = 0; i < U.rows; ++i) {
    const double* row = &U.data[static_cast<size_t>(i) * U.cols];
    const double ri = r[i];
    for (int j = 0; j < U.cols; ++j) z[j] += row[j] * ri;
  }
  return z;
}

DenseVector soft_threshold(const DenseVector& v, double lambda) {
  if (lambda < 0.0) throw std::invalid_argument("soft_threshold: lambda must be >= 0");
  DenseVector out(v.size());
  for (size_t i = 0; i < v.size(); ++i) {
    const double a = std::abs(v[i]) - lambda;
    out[i] = a > 0.0 ? (v[i] > 0.0 ? a : -a) : 0.0;
  }
  return out;
}

DenseVector hard_threshold_top_s(const DenseVector& v, int s) {
  const int d = static_cast<int>(v.size());
  if (s < 1 || s > d) throw std::invalid_argument("hard_threshold_top_s: s out of range");
  std::vector<int> order(v.size());
  std::iota(order.begin(), order.end(), 0);
  // stable partial sort by magnitude; equal magnitudes keep lowest index first
  std::stable_sort(order.begin(), order.end(),
                   [&](int a, int b) { return std::abs(v[a]) > std::abs(v[b]); });
  DenseVector out(v.size(), 0.0);
  for (int k = 0; k < s; ++k) out[order[k]] = v[order[k]];
  return out;
}

SupportSet support(const DenseVector& v, double tol) {
  if (tol < 0.0) throw std::invalid_argument("support: tol must be >= 0");
  SupportSet s;
  for (int i = 0; i < static_cast<int>(v.size()); ++i)
    if (std::abs(v[i]) > tol) s.push_back(i);
  return s;
}

Norms norms(const DenseVector& v) {
  Norms n;
  double sq = 0.0;
  for (double x : v) {
    if (x != 0.0) ++n.l0;
    n.l1 += std::abs(x);
    sq += x * x;
    n.linf = std::max(n.linf, std::abs(x));
  }
  n.l2 = std::sqrt(sq);
  return n;
}

int set_difference_size(const SupportSet& a, const SupportSet& b) {
  int count = 0;
  auto it = b.begin();
  for (int x : a) {
    while (it != b.end() && *it < x) ++it;
    if (it == b.end() || *it != x) ++count;
  }
  return count;
}

double dot(const DenseVector& a, const DenseVector& b) {
  double acc = 0.0;
  for (size_t i = 0; i < a.size(); ++i) acc += a[i] * b[i];
  return acc;
}

double norm2(const DenseVector& v) {
  return std::sqrt(dot(v, v));
}

DenseVector sub(const DenseVector& a, const DenseVector& b) {
  DenseVector out(a.size());
  for (size_t i = 0; i < a.size(); ++i) out[i] = a[i] - b[i];
  return out;
}

}  // namespace hpm
