#pragma once

#include <optional>
#include <vector>

#include "hpm/linalg.hpp"
#include "hpm/problem.hpp"
#include "hpm/rip.hpp"

namespace hpm {

enum class Algorithm {
  HpmOracleNoiseless,
  HpmOracleNoisy,
  Hpm1,
  Hpm2,
  Ista,
  Iht,
  Pgh,
};

struct SolverConfig {
  Algorithm algorithm = Algorithm::Hpm1;
  int s = 1;
  double eta = 0.4;          // homotopy contraction parameter
  double delta1 = 1.0;       // initial error-bound size
  double lambda_cap = 0.0;   // Lambda: noise / approximation level, 0 allowed
  double lambda1 = 0.0;      // geometric-decay start; <= 0 means 2*eta*delta1/sqrt(s)
  std::optional<RipConstants> rip;
  std::optional<double> ut_e_inf;
  int max_iters = 200;
  double ista_lambda = 0.0;
  std::optional<double> ista_step;  // default 1/L with L from power iteration
  double iht_gamma = 1.0;           // step size is 1/gamma
  double pgh_lambda_target = 1.0;
  double pgh_dec_factor = 0.7;
  double pgh_inner_tol_factor = 0.2;
  double error_floor = 1e-12;  // early stop on iterate change

  // Throws ContractViolation when the algorithm's stability condition fails
  // (eta too large, gamma >= 1, missing RIP constants, ...).
  void validate() const;
};

enum class Termination { MaxIters, SparsityStop, Plateau };

struct IterRecord {
  int t = 0;              // 1-based iteration index
  double lambda = 0.0;    // NaN when the solver has no lambda (IHT)
  double delta_bound = 0.0;  // schedule bound Delta_{t+1}; NaN when n/a
  int nnz = 0;
  double error_l2 = 0.0;     // NaN without ground truth
  double error_top_s = 0.0;  // NaN without ground truth
  int support_excess = -1;   // -1 without ground truth
  double objective = 0.0;    // 0.5||Ux-y||^2 + lambda ||x||_1; NaN for IHT
  // Iterate snapshot; sparse (support, values) when nnz <= d/4.
  bool sparse_snapshot = true;
  SupportSet snap_support;
  DenseVector snap_values;  // sparse: values on snap_support; dense: full vector
};

struct IterateTrace {
  int d = 0;
  std::vector<IterRecord> records;
  DenseVector final_x;
  Termination termination = Termination::MaxIters;
  int prox_update_count = 0;

  // Reconstructs the dense iterate recorded at records[idx].
  DenseVector iterate(size_t idx) const;
};

// One proximal-gradient step at unit step size:
// soft_threshold(x_t - U^T (U x_t - y), lambda_t).
DenseVector prox_gradient_step(const DenseMatrix& U, const DenseVector& y,
                               const DenseVector& x_t, double lambda_t);

// Largest eigenvalue of U^T U by power iteration (50 iterations, relative
// tolerance 1e-6, deterministic start vector).
double estimate_lipschitz(const DenseMatrix& U);

IterateTrace run_hpm_oracle_noiseless(const ProblemInstance& inst, const SolverConfig& cfg);
IterateTrace run_hpm_oracle_noisy(const ProblemInstance& inst, const SolverConfig& cfg);
IterateTrace run_hpm1(const ProblemInstance& inst, const SolverConfig& cfg);
IterateTrace run_hpm2(const ProblemInstance& inst, const SolverConfig& cfg);
IterateTrace run_ista(const ProblemInstance& inst, const SolverConfig& cfg);
IterateTrace run_iht(const ProblemInstance& inst, const SolverConfig& cfg);
IterateTrace run_pgh(const ProblemInstance& inst, const SolverConfig& cfg);

// Dispatch on cfg.algorithm.
IterateTrace run_solver(const ProblemInstance& inst, const SolverConfig& cfg);

}  // namespace hpm
