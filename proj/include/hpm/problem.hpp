#pragma once

#include <cstdint>
#include <string>

#include "hpm/linalg.hpp"

namespace hpm {

/// Target-signal family for the simulation protocols.
///   ExactSparse   s nonzeros ~ N(0,1) at random positions, unit l2 norm
///   PowerLaw      entry i = 1/i (1-indexed), unit l2 norm
///   ExpDecay      entry i = e^{-i}, left unnormalized
///   UniformSparse s nonzeros ~ U[-1,1] at random positions, unnormalized
///                 (matches the uniform-matrix comparison protocol)
struct SignalKind {
  enum class Kind { ExactSparse, PowerLaw, ExpDecay, UniformSparse };
  Kind kind = Kind::ExactSparse;
  int s = 1;  // used by ExactSparse / UniformSparse

  static SignalKind exact_sparse(int s) { return {Kind::ExactSparse, s}; }
  static SignalKind power_law() { return {Kind::PowerLaw, 0}; }
  static SignalKind exp_decay() { return {Kind::ExpDecay, 0}; }
  static SignalKind uniform_sparse(int s) { return {Kind::UniformSparse, s}; }
};

struct ProblemInstance {
  DenseMatrix U;       // n x d, entry variance 1/n
  DenseVector x_star;  // d
  DenseVector e;       // n
  DenseVector y;       // n, always U*x_star + e
  int s_true = 0;
  uint64_t seed = 0;
};

// n x d, i.i.d. N(0, 1/n) entries. Same (n, d, seed) gives bitwise-identical
// output.
DenseMatrix gen_gaussian_matrix(int n, int d, uint64_t seed);

// n x d, i.i.d. uniform on [-1, 1] scaled by sqrt(3/n) so the variance is 1/n.
DenseMatrix gen_uniform_matrix(int n, int d, uint64_t seed);

DenseVector gen_signal(int d, SignalKind kind, uint64_t seed);

// i.i.d. uniform on [-sigma, sigma]; sigma = 0 gives the exact zero vector.
DenseVector gen_uniform_noise(int n, double sigma, uint64_t seed);

ProblemInstance assemble(const DenseMatrix& U, const DenseVector& x_star,
                         const DenseVector& e);

// Directory layout: U.csv (n rows of d comma-separated values), x_star.csv,
// e.csv, y.csv (one value per line), meta (key = value lines). All floats
// written as "%.17g" so a round trip is exact.
void save_instance(const std::string& dir, const ProblemInstance& inst,
                   const std::string& kind_name, double sigma);
ProblemInstance load_instance(const std::string& dir);

// Matrix CSV: one row per line, comma-separated "%.17g" values.
DenseMatrix read_matrix_csv(const std::string& path);

std::string format_g17(double x);

}  // namespace hpm
