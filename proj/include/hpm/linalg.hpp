#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

namespace hpm {

using DenseVector = std::vector<double>;

/// Dense row-major matrix. Entries are expected to stay finite; use
/// validate() after filling from untrusted input.
struct DenseMatrix {
  int rows = 0;
  int cols = 0;
  std::vector<double> data;  // row-major, rows*cols

  DenseMatrix() = default;
  DenseMatrix(int n, int d) : rows(n), cols(d), data(static_cast<size_t>(n) * d, 0.0) {
    if (n < 1 || d < 1) throw std::invalid_argument("DenseMatrix: rows and cols must be >= 1");
  }

  double& operator()(int i, int j) { return data[static_cast<size_t>(i) * cols + j]; }
  double operator()(int i, int j) const { return data[static_cast<size_t>(i) * cols + j]; }
};

/// Sorted set of indices in [0, d). Represents the support of a vector.
using SupportSet = std::vector<int>;

void validate_finite(const DenseVector& v, const std::string& what);
void validate_finite(const DenseMatrix& m, const std::string& what);

// y = U x
DenseVector matvec(const DenseMatrix& U, const DenseVector& x);
// z = U^T r
DenseVector matvec_transpose(const DenseMatrix& U, const DenseVector& r);

// Entrywise sign(v_i) * max(|v_i| - lambda, 0). The proximal operator of
// lambda * l1.
DenseVector soft_threshold(const DenseVector& v, double lambda);

// Keeps the s largest-magnitude entries, zeroing the rest. Ties at the
// s-boundary go to the lowest index.
DenseVector hard_threshold_top_s(const DenseVector& v, int s);

// Indices with |v_i| > tol.
SupportSet support(const DenseVector& v, double tol = 0.0);

struct Norms {
  long long l0 = 0;
  double l1 = 0.0;
  double l2 = 0.0;
  double linf = 0.0;
};
Norms norms(const DenseVector& v);

// |a \ b| for sorted supports.
int set_difference_size(const SupportSet& a, const SupportSet& b);

double dot(const DenseVector& a, const DenseVector& b);
double norm2(const DenseVector& v);
DenseVector sub(const DenseVector& a, const DenseVector& b);

}  // namespace hpm
