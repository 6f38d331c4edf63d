#include "hpm/solvers.hpp"

#include <cmath>
#include <limits>

#include "hpm/errors.hpp"

namespace hpm {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();
constexpr double kLambdaFloor = 1e-15;
const double kSqrt2 = std::sqrt(2.0);

double gamma_of(const SolverConfig& cfg) {
  switch (cfg.algorithm) {
    case Algorithm::Hpm1:
      return (1.0 + kSqrt2) * cfg.eta;
    case Algorithm::Hpm2:
      return 2.0 * (1.0 + kSqrt2) * cfg.eta;
    default:
      return 0.0;
  }
}

}  // namespace

void SolverConfig::validate() const {
  if (s < 1) throw ContractViolation("SolverConfig: s must be >= 1");
  if (max_iters < 1) throw ContractViolation("SolverConfig: max_iters must be >= 1");
  switch (algorithm) {
    case Algorithm::HpmOracleNoiseless:
    case Algorithm::HpmOracleNoisy: {
      if (!rip) throw ContractViolation("SolverConfig: RIP constants required for oracle solvers");
      const auto g = gamma_condition(*rip, s);
      if (!g.satisfied)
        throw ContractViolation("SolverConfig: gamma = " + std::to_string(g.gamma) +
                                " >= 1; oracle schedule preconditions violated");
      if (algorithm == Algorithm::HpmOracleNoisy && !ut_e_inf)
        throw ContractViolation("SolverConfig: ut_e_inf required for the noisy oracle schedule");
      break;
    }
    case Algorithm::Hpm1:
      if (eta <= 0.0 || eta >= kSqrt2 - 1.0)
        throw ContractViolation("SolverConfig: Hpm1 requires 0 < eta < sqrt(2) - 1");
      break;
    case Algorithm::Hpm2:
      if (eta <= 0.0 || 2.0 * (1.0 + kSqrt2) * eta >= 1.0)
        throw ContractViolation("SolverConfig: Hpm2 requires 0 < 2(1+sqrt(2))eta < 1");
      break;
    case Algorithm::Ista:
      if (ista_lambda <= 0.0) throw ContractViolation("SolverConfig: ista_lambda must be > 0");
      break;
    case Algorithm::Iht:
      if (iht_gamma <= 0.0) throw ContractViolation("SolverConfig: iht_gamma must be > 0");
      break;
    case Algorithm::Pgh:
      if (pgh_lambda_target <= 0.0)
        throw ContractViolation("SolverConfig: pgh_lambda_target must be > 0");
      if (pgh_dec_factor <= 0.0 || pgh_dec_factor >= 1.0)
        throw ContractViolation("SolverConfig: pgh_dec_factor must be in (0, 1)");
      if (pgh_inner_tol_factor <= 0.0)
        throw ContractViolation("SolverConfig: pgh_inner_tol_factor must be > 0");
      break;
  }
}

DenseVector IterateTrace::iterate(size_t idx) const {
  const IterRecord& r = records.at(idx);
  if (!r.sparse_snapshot) return r.snap_values;
  DenseVector x(d, 0.0);
  for (size_t k = 0; k < r.snap_support.size(); ++k)
    x[r.snap_support[k]] = r.snap_values[k];
  return x;
}

DenseVector prox_gradient_step(const DenseMatrix& U, const DenseVector& y,
                               const DenseVector& x_t, double lambda_t) {
  if (lambda_t <= 0.0) throw std::invalid_argument("prox_gradient_step: lambda_t must be > 0");
  DenseVector r = matvec(U, x_t);
  for (size_t i = 0; i < r.size(); ++i) r[i] -= y[i];
  const DenseVector g = matvec_transpose(U, r);
  DenseVector xh(x_t.size());
  for (size_t i = 0; i < xh.size(); ++i) xh[i] = x_t[i] - g[i];
  return soft_threshold(xh, lambda_t);
}

double estimate_lipschitz(const DenseMatrix& U) {
  DenseVector v(U.cols, 1.0 / std::sqrt(static_cast<double>(U.cols)));
  double l = 0.0;
  for (int it = 0; it < 50; ++it) {
    DenseVector w = matvec_transpose(U, matvec(U, v));
    const double nw = norm2(w);
    if (nw == 0.0) return 0.0;
    if (l > 0.0 && std::abs(nw - l) <= 1e-6 * l) {
      l = nw;
      break;
    }
    l = nw;
    for (size_t i = 0; i < w.size(); ++i) v[i] = w[i] / nw;
  }
  return l;
}

namespace {

// Computes per-record diagnostics against the instance's ground truth.
class Recorder {
 public:
  Recorder(const ProblemInstance& inst, int s) : d_(inst.U.cols) {
    has_truth_ = !inst.x_star.empty();
    if (has_truth_) {
      x_star_ = inst.x_star;
      x_top_ = hard_threshold_top_s(inst.x_star, std::min(s, d_));
      s_star_ = support(x_top_);
    }
  }

  IterRecord make(int t, const DenseVector& x, double lambda, double delta_bound,
                  double objective) const {
    IterRecord r;
    r.t = t;
    r.lambda = lambda;
    r.delta_bound = delta_bound;
    r.objective = objective;
    const SupportSet sup = support(x);
    r.nnz = static_cast<int>(sup.size());
    if (has_truth_) {
      r.error_l2 = norm2(sub(x, x_star_));
      r.error_top_s = norm2(sub(x, x_top_));
      r.support_excess = set_difference_size(sup, s_star_);
    } else {
      r.error_l2 = kNaN;
      r.error_top_s = kNaN;
      r.support_excess = -1;
    }
    if (4 * r.nnz <= d_) {
      r.sparse_snapshot = true;
      r.snap_support = sup;
      r.snap_values.reserve(sup.size());
      for (int i : sup) r.snap_values.push_back(x[i]);
    } else {
      r.sparse_snapshot = false;
      r.snap_values = x;
    }
    return r;
  }

  bool has_truth() const { return has_truth_; }
  double norm_x_star() const { return has_truth_ ? norm2(x_star_) : 0.0; }
  double norm_x_top() const { return has_truth_ ? norm2(x_top_) : 0.0; }

 private:
  int d_;
  bool has_truth_ = false;
  DenseVector x_star_, x_top_;
  SupportSet s_star_;
};

double objective_value(const DenseVector& residual, const DenseVector& x, double lambda) {
  double q = 0.0;
  for (double r : residual) q += r * r;
  return 0.5 * q + lambda * norms(x).l1;
}

// Homotopy schedules share one loop: a lambda/Delta update rule plugged into
// the unit-step proximal iteration. Early stop on iterate change skips the
// all-zero prefix that a large initial lambda produces.
struct Schedule {
  double lambda = 0.0;       // lambda_t for the upcoming step
  double delta_bound = kNaN; // bound on the error of the produced iterate
};

template <typename NextSchedule>
IterateTrace run_homotopy(const ProblemInstance& inst, const SolverConfig& cfg,
                          Schedule sched, NextSchedule next, bool sparsity_stop) {
  const DenseMatrix& U = inst.U;
  const DenseVector& y = inst.y;
  Recorder rec(inst, cfg.s);
  IterateTrace trace;
  trace.d = U.cols;

  DenseVector x(U.cols, 0.0);
  DenseVector r(y.size());
  for (size_t i = 0; i < y.size(); ++i) r[i] = -y[i];

  for (int t = 1; t <= cfg.max_iters; ++t) {
    const double lambda_t = std::max(sched.lambda, kLambdaFloor);
    const DenseVector g = matvec_transpose(U, r);
    DenseVector xh(x.size());
    for (size_t i = 0; i < x.size(); ++i) xh[i] = x[i] - g[i];
    DenseVector x_next = soft_threshold(xh, lambda_t);
    ++trace.prox_update_count;

    if (sparsity_stop && norms(x_next).l0 > 2LL * cfg.s) {
      trace.final_x = x;
      trace.termination = Termination::SparsityStop;
      return trace;
    }

    DenseVector r_next = matvec(U, x_next);
    for (size_t i = 0; i < r_next.size(); ++i) r_next[i] -= y[i];
    const double obj = objective_value(r_next, x_next, lambda_t);
    sched = next(sched, t);
    trace.records.push_back(rec.make(t, x_next, lambda_t, sched.delta_bound, obj));

    const double step_change = norm2(sub(x_next, x));
    x = std::move(x_next);
    r = std::move(r_next);
    if (step_change <= cfg.error_floor && trace.records.back().nnz > 0) {
      trace.final_x = x;
      trace.termination = Termination::Plateau;
      return trace;
    }
  }
  trace.final_x = x;
  trace.termination = Termination::MaxIters;
  return trace;
}

}  // namespace

IterateTrace run_hpm_oracle_noiseless(const ProblemInstance& inst, const SolverConfig& cfg) {
  cfg.validate();
  for (double ei : inst.e)
    if (ei != 0.0)
      throw ContractViolation("run_hpm_oracle_noiseless: instance must be noiseless");
  Recorder probe(inst, cfg.s);
  if (probe.has_truth() && cfg.delta1 + 1e-9 < probe.norm_x_star())
    throw ContractViolation("run_hpm_oracle_noiseless: delta1 must be >= ||x_star||_2");
  const RipConstants& rip = *cfg.rip;
  const double gamma = gamma_condition(rip, cfg.s).gamma;
  const double c = (rip.delta.at(cfg.s) + kSqrt2 * rip.theta_ss) / std::sqrt(double(cfg.s));

  double delta = cfg.delta1;
  Schedule sched{c * delta, kNaN};
  auto next = [&, gamma, c](Schedule, int) {
    delta *= gamma;
    return Schedule{c * delta, delta};
  };
  return run_homotopy(inst, cfg, sched, next, false);
}

IterateTrace run_hpm_oracle_noisy(const ProblemInstance& inst, const SolverConfig& cfg) {
  cfg.validate();
  const RipConstants& rip = *cfg.rip;
  const double gamma = gamma_condition(rip, cfg.s).gamma;
  const double c = (rip.delta.at(cfg.s) + kSqrt2 * rip.theta_ss) / std::sqrt(double(cfg.s));
  const double ute = *cfg.ut_e_inf;
  const double noise_term = (1.0 + kSqrt2) * std::sqrt(double(cfg.s)) * ute;

  double delta = cfg.delta1;
  Schedule sched{c * delta + ute, kNaN};
  auto next = [&, gamma, c, ute, noise_term](Schedule, int) {
    delta = gamma * delta + noise_term;
    return Schedule{c * delta + ute, delta};
  };
  return run_homotopy(inst, cfg, sched, next, false);
}

IterateTrace run_hpm1(const ProblemInstance& inst, const SolverConfig& cfg) {
  cfg.validate();
  if (cfg.lambda_cap < 0.0) throw ContractViolation("run_hpm1: Lambda must be >= 0");
  Recorder probe(inst, cfg.s);
  if (probe.has_truth() &&
      cfg.delta1 + 1e-9 < std::max(probe.norm_x_top(), cfg.lambda_cap))
    throw ContractViolation("run_hpm1: delta1 must be >= max(||x_star^s||_2, Lambda)");
  const double gamma = gamma_of(cfg);
  const double sqrt_s = std::sqrt(double(cfg.s));
  const double cap = cfg.lambda_cap;

  double delta = cfg.delta1;
  Schedule sched{(cap + cfg.eta * delta) / sqrt_s, kNaN};
  auto next = [&, gamma, cap, sqrt_s](Schedule, int) {
    delta = gamma * delta + (1.0 + kSqrt2) * cap;
    return Schedule{(cap + cfg.eta * delta) / sqrt_s, delta};
  };
  return run_homotopy(inst, cfg, sched, next, false);
}

IterateTrace run_hpm2(const ProblemInstance& inst, const SolverConfig& cfg) {
  cfg.validate();
  const double gamma = gamma_of(cfg);
  const double lambda1 = cfg.lambda1 > 0.0
                             ? cfg.lambda1
                             : 2.0 * cfg.eta * cfg.delta1 / std::sqrt(double(cfg.s));

  Schedule sched{lambda1, kNaN};
  auto next = [gamma](Schedule s, int) {
    return Schedule{gamma * s.lambda, kNaN};
  };
  return run_homotopy(inst, cfg, sched, next, true);
}

IterateTrace run_ista(const ProblemInstance& inst, const SolverConfig& cfg) {
  cfg.validate();
  const DenseMatrix& U = inst.U;
  const DenseVector& y = inst.y;
  Recorder rec(inst, cfg.s);
  IterateTrace trace;
  trace.d = U.cols;

  const double step = cfg.ista_step ? *cfg.ista_step : 1.0 / estimate_lipschitz(U);
  const double lambda = cfg.ista_lambda;

  DenseVector x(U.cols, 0.0);
  DenseVector r(y.size());
  for (size_t i = 0; i < y.size(); ++i) r[i] = -y[i];

  for (int t = 1; t <= cfg.max_iters; ++t) {
    const DenseVector g = matvec_transpose(U, r);
    DenseVector xh(x.size());
    for (size_t i = 0; i < x.size(); ++i) xh[i] = x[i] - step * g[i];
    DenseVector x_next = soft_threshold(xh, lambda * step);
    ++trace.prox_update_count;
    DenseVector r_next = matvec(U, x_next);
    for (size_t i = 0; i < r_next.size(); ++i) r_next[i] -= y[i];
    trace.records.push_back(
        rec.make(t, x_next, lambda, kNaN, objective_value(r_next, x_next, lambda)));
    const double step_change = norm2(sub(x_next, x));
    x = std::move(x_next);
    r = std::move(r_next);
    if (step_change <= cfg.error_floor) {
      trace.final_x = x;
      trace.termination = Termination::Plateau;
      return trace;
    }
  }
  trace.final_x = x;
  trace.termination = Termination::MaxIters;
  return trace;
}

IterateTrace run_iht(const ProblemInstance& inst, const SolverConfig& cfg) {
  cfg.validate();
  const DenseMatrix& U = inst.U;
  const DenseVector& y = inst.y;
  Recorder rec(inst, cfg.s);
  IterateTrace trace;
  trace.d = U.cols;

  const double step = 1.0 / cfg.iht_gamma;
  DenseVector x(U.cols, 0.0);
  for (int t = 1; t <= cfg.max_iters; ++t) {
    DenseVector r = matvec(U, x);
    for (size_t i = 0; i < r.size(); ++i) r[i] -= y[i];
    const DenseVector g = matvec_transpose(U, r);
    DenseVector xh(x.size());
    for (size_t i = 0; i < x.size(); ++i) xh[i] = x[i] - step * g[i];
    DenseVector x_next = hard_threshold_top_s(xh, cfg.s);
    trace.records.push_back(rec.make(t, x_next, kNaN, kNaN, kNaN));
    const double step_change = norm2(sub(x_next, x));
    x = std::move(x_next);
    if (step_change <= cfg.error_floor) {
      trace.final_x = x;
      trace.termination = Termination::Plateau;
      return trace;
    }
  }
  trace.final_x = x;
  trace.termination = Termination::MaxIters;
  return trace;
}

IterateTrace run_pgh(const ProblemInstance& inst, const SolverConfig& cfg) {
  cfg.validate();
  const DenseMatrix& U = inst.U;
  const DenseVector& y = inst.y;
  Recorder rec(inst, cfg.s);
  IterateTrace trace;
  trace.d = U.cols;

  const double step = cfg.ista_step ? *cfg.ista_step : 1.0 / estimate_lipschitz(U);
  double lambda = std::max(norms(matvec_transpose(U, y)).linf, cfg.pgh_lambda_target);

  DenseVector x(U.cols, 0.0);
  DenseVector r(y.size());
  for (size_t i = 0; i < y.size(); ++i) r[i] = -y[i];

  while (true) {
    // one stage at the current lambda
    while (true) {
      if (trace.prox_update_count >= cfg.max_iters) {
        trace.final_x = x;
        trace.termination = Termination::MaxIters;
        return trace;
      }
      const DenseVector g = matvec_transpose(U, r);
      DenseVector xh(x.size());
      for (size_t i = 0; i < x.size(); ++i) xh[i] = x[i] - step * g[i];
      DenseVector x_next = soft_threshold(xh, lambda * step);
      ++trace.prox_update_count;
      DenseVector r_next = matvec(U, x_next);
      for (size_t i = 0; i < r_next.size(); ++i) r_next[i] -= y[i];
      trace.records.push_back(rec.make(trace.prox_update_count, x_next, lambda, kNaN,
                                       objective_value(r_next, x_next, lambda)));
      double dinf = 0.0;
      for (size_t i = 0; i < x.size(); ++i)
        dinf = std::max(dinf, std::abs(x_next[i] - x[i]));
      x = std::move(x_next);
      r = std::move(r_next);
      if (dinf <= cfg.pgh_inner_tol_factor * lambda) break;
    }
    if (lambda <= cfg.pgh_lambda_target) break;
    lambda = std::max(cfg.pgh_lambda_target, cfg.pgh_dec_factor * lambda);
  }
  trace.final_x = x;
  trace.termination = Termination::Plateau;
  return trace;
}

IterateTrace run_solver(const ProblemInstance& inst, const SolverConfig& cfg) {
  switch (cfg.algorithm) {
    case Algorithm::HpmOracleNoiseless:
      return run_hpm_oracle_noiseless(inst, cfg);
    case Algorithm::HpmOracleNoisy:
      return run_hpm_oracle_noisy(inst, cfg);
    case Algorithm::Hpm1:
      return run_hpm1(inst, cfg);
    case Algorithm::Hpm2:
      return run_hpm2(inst, cfg);
    case Algorithm::Ista:
      return run_ista(inst, cfg);
    case Algorithm::Iht:
      return run_iht(inst, cfg);
    case Algorithm::Pgh:
      return run_pgh(inst, cfg);
  }
  throw std::invalid_argument("run_solver: unknown algorithm");
}

}  // namespace hpm
