#pragma once

#include <cstdint>
#include <map>

#include "hpm/linalg.hpp"

namespace hpm {

/// Exhaustively computed restricted-isometry data for one matrix.
/// delta[k] is the worst deviation of the spectrum of any k-column Gram block
/// from 1; theta_ss bounds cross-correlation between disjoint size-s blocks.
struct RipConstants {
  std::map<int, double> delta;
  double theta_ss = 0.0;
  int s = 0;
};

inline constexpr long long kEnumerationCap = 1'000'000;

// Worst-case |eigenvalue - 1| of U_T^T U_T over all supports |T| = k.
// Exact by enumeration; throws if C(d, k) exceeds the cap.
double delta_exhaustive(const DenseMatrix& U, int k,
                        long long cap = kEnumerationCap);

// Max spectral norm of U_T^T U_{T'} over disjoint supports |T| = |T'| = s.
// Smaller supports are dominated (submatrix spectral norms only shrink).
double theta_exhaustive(const DenseMatrix& U, int s,
                        long long cap = kEnumerationCap);

// gamma = delta_s + sqrt(2) * theta_ss + delta_3s, and whether gamma < 1.
struct GammaResult {
  double gamma = 0.0;
  bool satisfied = false;
};
GammaResult gamma_condition(const RipConstants& c, int s);

// Compares ||U^T e||_inf against theta * ||e||_2 * sqrt((tau + log d)/n).
// The bound is probabilistic, so callers report rather than assert it.
struct InfBoundReport {
  double actual = 0.0;
  double bound = 0.0;
  bool within = false;
};
InfBoundReport ut_e_inf_bound_report(const DenseMatrix& U, const DenseVector& e,
                                     double theta_const, double tau);

// Convenience: delta_1..delta_{3s} plus theta_ss for a matrix small enough to
// certify exhaustively.
RipConstants compute_rip_constants(const DenseMatrix& U, int s,
                                   long long cap = kEnumerationCap);

// n x d frame with near-minimal column coherence, built by alternating
// projection between unit-norm rank-n Gram matrices and Gram matrices whose
// off-diagonal entries shrink toward the lower bound sqrt((d-n)/(n(d-1))).
// Small dimensions only; used to manufacture instances whose exhaustive
// gamma lands below 1.
DenseMatrix gen_low_coherence_frame(int n, int d, uint64_t seed,
                                    int iters = 4000);

}  // namespace hpm
