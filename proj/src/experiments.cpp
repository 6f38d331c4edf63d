#include "hpm/experiments.hpp"

#include <atomic>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <mutex>
#include <stdexcept>
#include <thread>

#include "hpm/errors.hpp"
#include "hpm/metrics.hpp"
#include "hpm/random.hpp"
#include "hpm/trace_io.hpp"

namespace hpm {

int worker_count() {
  if (const char* env = std::getenv(kWorkersEnvVar)) {
    const int v = std::atoi(env);
    if (v >= 1) return v;
  }
  const unsigned hc = std::thread::hardware_concurrency();
  return hc ? static_cast<int>(hc) : 1;
}

namespace {

void parallel_for(int count, const std::function<void(int)>& fn) {
  const int workers = std::min(worker_count(), count);
  if (workers <= 1) {
    for (int i = 0; i < count; ++i) fn(i);
    return;
  }
  std::atomic<int> next{0};
  std::vector<std::thread> pool;
  std::exception_ptr first_error;
  std::mutex err_mu;
  for (int w = 0; w < workers; ++w) {
    pool.emplace_back([&] {
      for (int i = next.fetch_add(1); i < count; i = next.fetch_add(1)) {
        try {
          fn(i);
        } catch (...) {
          std::lock_guard<std::mutex> lock(err_mu);
          if (!first_error) first_error = std::current_exception();
        }
      }
    });
  }
  for (auto& t : pool) t.join();
  if (first_error) std::rethrow_exception(first_error);
}

std::string fmt_short(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%g", v);
  return buf;
}

std::string term_name(Termination t) {
  switch (t) {
    case Termination::MaxIters: return "max_iters";
    case Termination::SparsityStop: return "sparsity_stop";
    case Termination::Plateau: return "plateau";
  }
  return "?";
}

struct TrialResult {
  uint64_t seed = 0;
  RecoveryReport report;
  int iterations = 0;
  int prox = 0;
  Termination term = Termination::MaxIters;
};

TrialResult summarize(const ProblemInstance& inst, const IterateTrace& trace, int s) {
  TrialResult r;
  r.seed = inst.seed;
  r.report = recovery_report(trace.final_x, inst.x_star, s);
  r.iterations = static_cast<int>(trace.records.size());
  r.prox = trace.prox_update_count;
  r.term = trace.termination;
  return r;
}

double ut_e_inf(const ProblemInstance& inst) {
  bool any = false;
  for (double v : inst.e)
    if (v != 0.0) any = true;
  if (!any) return 0.0;
  return norms(matvec_transpose(inst.U, inst.e)).linf;
}

SolverConfig hpm1_harness_config(const ProblemInstance& inst, int s, double eta,
                                 bool with_approx_term, int max_iters) {
  SolverConfig sc;
  sc.algorithm = Algorithm::Hpm1;
  sc.s = s;
  sc.eta = eta;
  sc.max_iters = max_iters;
  double cap = std::sqrt(static_cast<double>(s)) * ut_e_inf(inst);
  if (with_approx_term)
    cap += eta * norm2(sub(inst.x_star, hard_threshold_top_s(inst.x_star, s)));
  sc.lambda_cap = cap;
  sc.delta1 = std::max(norm2(inst.x_star), cap);
  return sc;
}

SolverConfig hpm2_harness_config(const ProblemInstance& inst, int s, double eta,
                                 int max_iters) {
  SolverConfig sc;
  sc.algorithm = Algorithm::Hpm2;
  sc.s = s;
  sc.eta = eta;
  sc.max_iters = max_iters;
  sc.lambda1 = norms(matvec_transpose(inst.U, inst.y)).linf;
  sc.delta1 = sc.lambda1 * std::sqrt(static_cast<double>(s));
  return sc;
}

}  // namespace

ProblemInstance make_gaussian_instance(int n, int d, SignalKind kind, double sigma,
                                       uint64_t seed) {
  const DenseMatrix U = gen_gaussian_matrix(n, d, derive_seed(seed, 1));
  const DenseVector x = gen_signal(d, kind, derive_seed(seed, 2));
  const DenseVector e = gen_uniform_noise(n, sigma, derive_seed(seed, 3));
  ProblemInstance inst = assemble(U, x, e);
  inst.seed = seed;
  if (kind.kind == SignalKind::Kind::PowerLaw || kind.kind == SignalKind::Kind::ExpDecay)
    inst.s_true = kind.s;
  return inst;
}

ProblemInstance make_uniform_instance(int n, int d, SignalKind kind, double sigma,
                                      uint64_t seed) {
  const DenseMatrix U = gen_uniform_matrix(n, d, derive_seed(seed, 1));
  const DenseVector x = gen_signal(d, kind, derive_seed(seed, 2));
  const double sigma_eff = sigma * std::sqrt(3.0 / n);
  const DenseVector e = gen_uniform_noise(n, sigma_eff, derive_seed(seed, 3));
  ProblemInstance inst = assemble(U, x, e);
  inst.seed = seed;
  if (kind.kind == SignalKind::Kind::PowerLaw || kind.kind == SignalKind::Kind::ExpDecay)
    inst.s_true = kind.s;
  return inst;
}

namespace {

struct Resolved {
  int n, d, s, trials;
  double sigma;
  uint64_t seed;
  int max_iters;
};

Resolved resolve(const ExperimentConfig& cfg, int def_n, int def_d, int def_s,
                 double def_sigma) {
  Resolved r;
  r.n = cfg.n > 0 ? cfg.n : def_n;
  r.d = cfg.d > 0 ? cfg.d : def_d;
  r.s = cfg.s > 0 ? cfg.s : def_s;
  r.sigma = cfg.sigma >= 0.0 ? cfg.sigma : def_sigma;
  r.seed = cfg.seed;
  r.trials = cfg.trials;
  r.max_iters = cfg.solver.max_iters;
  if (cfg.trials < 1) throw ContractViolation("run_protocol: trials must be >= 1");
  if (r.n < 1 || r.d < 1 || r.s < 1 || r.s > r.d)
    throw ContractViolation("run_protocol: invalid n/d/s");
  return r;
}

using MetaEntries = std::vector<std::pair<std::string, std::string>>;

void append_trial_seeds(MetaEntries& meta, uint64_t master, int trials) {
  for (int k = 0; k < trials; ++k)
    meta.emplace_back("trial_" + std::to_string(k) + "_seed",
                      std::to_string(derive_seed(master, static_cast<uint64_t>(k))));
}

void write_summary(const std::string& path, const std::string& header,
                   const std::vector<std::string>& rows) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open " + path);
  out << header << "\n";
  for (const auto& r : rows) out << r << "\n";
}

// Setting1/2/3: exact-sparse or power-law signals, Gaussian matrix, the
// contraction-schedule solver with its harness Lambda.
void run_setting(const ExperimentConfig& cfg, int which) {
  const Resolved r = resolve(cfg, 2000, 10000, 20, which == 1 ? 0.0 : 0.001);
  const double sigma = which == 1 ? 0.0 : r.sigma;
  const double eta = which == 3 ? 0.3 : 0.4;
  const SignalKind kind = which == 3 ? SignalKind::power_law()
                                     : SignalKind::exact_sparse(r.s);
  std::filesystem::create_directories(cfg.output_dir);
  std::vector<TrialResult> results(r.trials);
  parallel_for(r.trials, [&](int k) {
    const uint64_t seed = derive_seed(r.seed, static_cast<uint64_t>(k));
    ProblemInstance inst = make_gaussian_instance(r.n, r.d, kind, sigma, seed);
    if (which == 3) inst.s_true = r.s;
    const SolverConfig sc = hpm1_harness_config(inst, r.s, eta, which == 3, r.max_iters);
    const IterateTrace trace = run_hpm1(inst, sc);
    const std::string dir = cfg.output_dir + "/trial_" + std::to_string(k);
    std::filesystem::create_directories(dir);
    write_trace_csv(dir + "/trace.csv", trace);
    write_meta(dir + "/meta", {{"n", std::to_string(r.n)},
                               {"d", std::to_string(r.d)},
                               {"s", std::to_string(r.s)},
                               {"sigma", format_g17(sigma)},
                               {"eta", format_g17(eta)},
                               {"lambda_cap", format_g17(sc.lambda_cap)},
                               {"delta1", format_g17(sc.delta1)},
                               {"max_iters", std::to_string(r.max_iters)},
                               {"seed", std::to_string(seed)}});
    results[k] = summarize(inst, trace, r.s);
  });
  std::vector<std::string> rows;
  for (int k = 0; k < r.trials; ++k) {
    const TrialResult& t = results[k];
    rows.push_back(std::to_string(k) + "," + std::to_string(t.seed) + "," +
                   format_g17(t.report.full_error) + "," +
                   format_g17(t.report.top_s_error) + "," + std::to_string(t.iterations) +
                   "," + std::to_string(t.prox) + "," + term_name(t.term));
  }
  write_summary(cfg.output_dir + "/summary.csv",
                "trial,seed,final_error,final_top_s_error,iterations,prox_update_count,"
                "termination",
                rows);
  MetaEntries meta{{"protocol", "setting" + std::to_string(which)},
                   {"n", std::to_string(r.n)},
                   {"d", std::to_string(r.d)},
                   {"s", std::to_string(r.s)},
                   {"sigma", format_g17(sigma)},
                   {"eta", format_g17(eta)},
                   {"max_iters", std::to_string(r.max_iters)},
                   {"trials", std::to_string(r.trials)},
                   {"seed", std::to_string(r.seed)}};
  append_trial_seeds(meta, r.seed, r.trials);
  write_meta(cfg.output_dir + "/meta", meta);
}

void run_eta_sweep(const ExperimentConfig& cfg) {
  if (cfg.eta_list.empty())
    throw ContractViolation("EtaSweep: eta_list must be non-empty");
  const Resolved r = resolve(cfg, 2000, 10000, 20, 0.001);
  std::filesystem::create_directories(cfg.output_dir);
  const int total = static_cast<int>(cfg.eta_list.size()) * r.trials;
  std::vector<TrialResult> results(total);
  parallel_for(total, [&](int idx) {
    const int ei = idx / r.trials;
    const int k = idx % r.trials;
    const double eta = cfg.eta_list[ei];
    const uint64_t seed = derive_seed(r.seed, static_cast<uint64_t>(k));
    const ProblemInstance inst =
        make_gaussian_instance(r.n, r.d, SignalKind::exact_sparse(r.s), r.sigma, seed);
    const SolverConfig sc = hpm1_harness_config(inst, r.s, eta, false, r.max_iters);
    const IterateTrace trace = run_hpm1(inst, sc);
    const std::string dir =
        cfg.output_dir + "/eta_" + fmt_short(eta) + "/trial_" + std::to_string(k);
    std::filesystem::create_directories(dir);
    write_trace_csv(dir + "/trace.csv", trace);
    write_meta(dir + "/meta", {{"eta", format_g17(eta)},
                               {"n", std::to_string(r.n)},
                               {"d", std::to_string(r.d)},
                               {"s", std::to_string(r.s)},
                               {"sigma", format_g17(r.sigma)},
                               {"max_iters", std::to_string(r.max_iters)},
                               {"seed", std::to_string(seed)}});
    results[idx] = summarize(inst, trace, r.s);
  });
  std::vector<std::string> rows;
  for (int idx = 0; idx < total; ++idx) {
    const int ei = idx / r.trials;
    const int k = idx % r.trials;
    rows.push_back(fmt_short(cfg.eta_list[ei]) + "," + std::to_string(k) + "," +
                   format_g17(results[idx].report.full_error) + "," +
                   format_g17(results[idx].report.top_s_error) + "," +
                   std::to_string(results[idx].prox));
  }
  write_summary(cfg.output_dir + "/summary.csv",
                "eta,trial,final_error,final_top_s_error,prox_update_count", rows);
  MetaEntries meta{{"protocol", "eta_sweep"},
                   {"n", std::to_string(r.n)},
                   {"d", std::to_string(r.d)},
                   {"s", std::to_string(r.s)},
                   {"sigma", format_g17(r.sigma)},
                   {"max_iters", std::to_string(r.max_iters)},
                   {"trials", std::to_string(r.trials)},
                   {"seed", std::to_string(r.seed)}};
  std::string etas;
  for (double e : cfg.eta_list) etas += (etas.empty() ? "" : " ") + fmt_short(e);
  meta.emplace_back("eta_list", etas);
  append_trial_seeds(meta, r.seed, r.trials);
  write_meta(cfg.output_dir + "/meta", meta);
}

void run_n_sweep(const ExperimentConfig& cfg) {
  if (cfg.n_list.empty()) throw ContractViolation("NSweep: n_list must be non-empty");
  const Resolved r = resolve(cfg, cfg.n_list.front(), 10000, 20, 0.001);
  std::filesystem::create_directories(cfg.output_dir);
  const int total = static_cast<int>(cfg.n_list.size()) * r.trials;
  std::vector<TrialResult> results(total);
  parallel_for(total, [&](int idx) {
    const int ni = idx / r.trials;
    const int k = idx % r.trials;
    const int n = cfg.n_list[ni];
    const uint64_t seed = derive_seed(r.seed, static_cast<uint64_t>(k));
    const ProblemInstance inst =
        make_gaussian_instance(n, r.d, SignalKind::exact_sparse(r.s), r.sigma, seed);
    const SolverConfig sc = hpm1_harness_config(inst, r.s, 0.4, false, r.max_iters);
    const IterateTrace trace = run_hpm1(inst, sc);
    const std::string dir =
        cfg.output_dir + "/n_" + std::to_string(n) + "/trial_" + std::to_string(k);
    std::filesystem::create_directories(dir);
    write_trace_csv(dir + "/trace.csv", trace);
    write_meta(dir + "/meta", {{"n", std::to_string(n)},
                               {"d", std::to_string(r.d)},
                               {"s", std::to_string(r.s)},
                               {"sigma", format_g17(r.sigma)},
                               {"max_iters", std::to_string(r.max_iters)},
                               {"seed", std::to_string(seed)}});
    results[idx] = summarize(inst, trace, r.s);
  });
  std::vector<std::string> rows;
  for (int idx = 0; idx < total; ++idx) {
    const int ni = idx / r.trials;
    const int k = idx % r.trials;
    rows.push_back(std::to_string(cfg.n_list[ni]) + "," + std::to_string(k) + "," +
                   format_g17(results[idx].report.full_error) + "," +
                   format_g17(results[idx].report.top_s_error) + "," +
                   std::to_string(results[idx].prox));
  }
  write_summary(cfg.output_dir + "/summary.csv",
                "n,trial,final_error,final_top_s_error,prox_update_count", rows);
  MetaEntries meta{{"protocol", "n_sweep"},
                   {"d", std::to_string(r.d)},
                   {"s", std::to_string(r.s)},
                   {"sigma", format_g17(r.sigma)},
                   {"max_iters", std::to_string(r.max_iters)},
                   {"trials", std::to_string(r.trials)},
                   {"seed", std::to_string(r.seed)}};
  std::string ns;
  for (int n : cfg.n_list) ns += (ns.empty() ? "" : " ") + std::to_string(n);
  meta.emplace_back("n_list", ns);
  append_trial_seeds(meta, r.seed, r.trials);
  write_meta(cfg.output_dir + "/meta", meta);
}

// PghCompare / BaselineCompare: uniform-matrix protocol, one row per solver
// in the summary.
void run_compare(const ExperimentConfig& cfg, bool against_pgh) {
  const Resolved r = resolve(cfg, 1000, 5000, 100, 0.01);
  const double eta = cfg.solver.eta > 0.0 && cfg.solver.algorithm == Algorithm::Hpm2
                         ? cfg.solver.eta
                         : 0.185;
  const SignalKind kind = against_pgh ? SignalKind::uniform_sparse(r.s)
                                      : SignalKind::exp_decay();
  std::filesystem::create_directories(cfg.output_dir);

  struct Row {
    std::string solver;
    RecoveryReport report;
    int prox = 0;
  };
  std::vector<std::vector<Row>> per_trial(r.trials);
  parallel_for(r.trials, [&](int k) {
    const uint64_t seed = derive_seed(r.seed, static_cast<uint64_t>(k));
    ProblemInstance inst = make_uniform_instance(r.n, r.d, kind, r.sigma, seed);
    inst.s_true = r.s;
    const std::string tdir =
        r.trials == 1 ? cfg.output_dir : cfg.output_dir + "/trial_" + std::to_string(k);

    auto run_one = [&](const std::string& name, const SolverConfig& sc,
                       IterateTrace (*runner)(const ProblemInstance&, const SolverConfig&)) {
      const IterateTrace trace = runner(inst, sc);
      const std::string dir = tdir + "/" + name;
      std::filesystem::create_directories(dir);
      write_trace_csv(dir + "/trace.csv", trace);
      Row row;
      row.solver = name;
      row.report = recovery_report(trace.final_x, inst.x_star, r.s);
      row.prox = trace.prox_update_count;
      per_trial[k].push_back(row);
    };

    run_one("hpm2", hpm2_harness_config(inst, r.s, eta, r.max_iters), run_hpm2);
    if (against_pgh) {
      SolverConfig pc;
      pc.algorithm = Algorithm::Pgh;
      pc.s = r.s;
      pc.pgh_lambda_target = cfg.solver.pgh_lambda_target;
      pc.pgh_dec_factor = cfg.solver.pgh_dec_factor;
      pc.pgh_inner_tol_factor = cfg.solver.pgh_inner_tol_factor;
      pc.max_iters = std::max(r.max_iters, 3000);
      run_one("pgh", pc, run_pgh);
    } else {
      SolverConfig ic;
      ic.algorithm = Algorithm::Ista;
      ic.s = r.s;
      ic.ista_lambda = cfg.solver.ista_lambda > 0.0
                           ? cfg.solver.ista_lambda
                           : 0.01 * norms(matvec_transpose(inst.U, inst.y)).linf;
      ic.max_iters = std::max(r.max_iters, 400);
      run_one("ista", ic, run_ista);
      SolverConfig hc;
      hc.algorithm = Algorithm::Iht;
      hc.s = r.s;
      hc.iht_gamma = cfg.solver.iht_gamma > 0.0 ? cfg.solver.iht_gamma : 2.0;
      hc.max_iters = std::max(r.max_iters, 400);
      run_one("iht", hc, run_iht);
    }
    write_meta(tdir + "/meta", {{"n", std::to_string(r.n)},
                                {"d", std::to_string(r.d)},
                                {"s", std::to_string(r.s)},
                                {"sigma", format_g17(r.sigma)},
                                {"eta", format_g17(eta)},
                                {"max_iters", std::to_string(r.max_iters)},
                                {"seed", std::to_string(seed)}});
  });
  std::vector<std::string> rows;
  for (int k = 0; k < r.trials; ++k)
    for (const auto& row : per_trial[k])
      rows.push_back(row.solver + "," + format_g17(row.report.full_error) + "," +
                     format_g17(row.report.top_s_error) + "," +
                     format_g17(row.report.top_s_projected_error) + "," +
                     std::to_string(row.prox));
  write_summary(cfg.output_dir + "/summary.csv",
                "solver,final_error,final_top_s_error,final_top_s_projected_error,"
                "prox_update_count",
                rows);
  MetaEntries meta{{"protocol", against_pgh ? "pgh_compare" : "baseline_compare"},
                   {"n", std::to_string(r.n)},
                   {"d", std::to_string(r.d)},
                   {"s", std::to_string(r.s)},
                   {"sigma", format_g17(r.sigma)},
                   {"eta", format_g17(eta)},
                   {"max_iters", std::to_string(r.max_iters)},
                   {"trials", std::to_string(r.trials)},
                   {"seed", std::to_string(r.seed)}};
  append_trial_seeds(meta, r.seed, r.trials);
  write_meta(cfg.output_dir + "/meta", meta);
}

void run_custom(const ExperimentConfig& cfg) {
  const Resolved r = resolve(cfg, 500, 2500, 10, 0.0);
  std::filesystem::create_directories(cfg.output_dir);
  std::vector<TrialResult> results(r.trials);
  parallel_for(r.trials, [&](int k) {
    const uint64_t seed = derive_seed(r.seed, static_cast<uint64_t>(k));
    const ProblemInstance inst =
        make_gaussian_instance(r.n, r.d, SignalKind::exact_sparse(r.s), r.sigma, seed);
    SolverConfig sc = cfg.solver;
    sc.s = sc.s > 1 ? sc.s : r.s;
    if (sc.delta1 <= 0.0)
      sc.delta1 = norms(matvec_transpose(inst.U, inst.y)).linf *
                  std::sqrt(static_cast<double>(sc.s));
    if (sc.algorithm == Algorithm::Hpm2 && sc.lambda1 <= 0.0)
      sc.lambda1 = norms(matvec_transpose(inst.U, inst.y)).linf;
    const IterateTrace trace = run_solver(inst, sc);
    const std::string dir = cfg.output_dir + "/trial_" + std::to_string(k);
    std::filesystem::create_directories(dir);
    write_trace_csv(dir + "/trace.csv", trace);
    write_meta(dir + "/meta", {{"n", std::to_string(r.n)},
                               {"d", std::to_string(r.d)},
                               {"s", std::to_string(r.s)},
                               {"sigma", format_g17(r.sigma)},
                               {"seed", std::to_string(seed)}});
    results[k] = summarize(inst, trace, sc.s);
  });
  std::vector<std::string> rows;
  for (int k = 0; k < r.trials; ++k) {
    const TrialResult& t = results[k];
    rows.push_back(std::to_string(k) + "," + std::to_string(t.seed) + "," +
                   format_g17(t.report.full_error) + "," +
                   format_g17(t.report.top_s_error) + "," + std::to_string(t.iterations) +
                   "," + std::to_string(t.prox) + "," + term_name(t.term));
  }
  write_summary(cfg.output_dir + "/summary.csv",
                "trial,seed,final_error,final_top_s_error,iterations,prox_update_count,"
                "termination",
                rows);
  MetaEntries meta{{"protocol", "custom"},
                   {"n", std::to_string(r.n)},
                   {"d", std::to_string(r.d)},
                   {"s", std::to_string(r.s)},
                   {"sigma", format_g17(r.sigma)},
                   {"trials", std::to_string(r.trials)},
                   {"seed", std::to_string(r.seed)}};
  append_trial_seeds(meta, r.seed, r.trials);
  write_meta(cfg.output_dir + "/meta", meta);
}

}  // namespace

void run_protocol(const ExperimentConfig& cfg) {
  if (cfg.output_dir.empty())
    throw ContractViolation("run_protocol: output_dir must be set");
  switch (cfg.protocol) {
    case Protocol::Setting1: run_setting(cfg, 1); break;
    case Protocol::Setting2: run_setting(cfg, 2); break;
    case Protocol::Setting3: run_setting(cfg, 3); break;
    case Protocol::EtaSweep: run_eta_sweep(cfg); break;
    case Protocol::NSweep: run_n_sweep(cfg); break;
    case Protocol::PghCompare: run_compare(cfg, true); break;
    case Protocol::BaselineCompare: run_compare(cfg, false); break;
    case Protocol::Custom: run_custom(cfg); break;
  }
}

}  // namespace hpm
