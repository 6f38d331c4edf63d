// Command-line front end: instance generation, single solver runs, parameter
// sweeps, RIP probing, and solver comparisons. Exit codes: 0 success, 1 usage
// or I/O error, 2 contract violation (e.g. a contraction condition fails).
#include <CLI11.hpp>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <map>

#include "hpm/errors.hpp"
#include "hpm/experiments.hpp"
#include "hpm/metrics.hpp"
#include "hpm/problem.hpp"
#include "hpm/random.hpp"
#include "hpm/rip.hpp"
#include "hpm/solvers.hpp"
#include "hpm/trace_io.hpp"

namespace {

using namespace hpm;

RipConstants load_rip_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open rip file " + path);
  RipConstants c;
  std::map<std::string, std::string> kv;
  std::string line;
  while (std::getline(in, line)) {
    const auto hash = line.find('#');
    if (hash != std::string::npos) line = line.substr(0, hash);
    const auto eq = line.find('=');
    if (eq == std::string::npos) continue;
    auto trim = [](std::string t) {
      const auto a = t.find_first_not_of(" \t");
      const auto b = t.find_last_not_of(" \t\r");
      return a == std::string::npos ? std::string() : t.substr(a, b - a + 1);
    };
    kv[trim(line.substr(0, eq))] = trim(line.substr(eq + 1));
  }
  if (!kv.count("s")) throw std::runtime_error("rip file missing key: s");
  c.s = std::stoi(kv.at("s"));
  for (const auto& [k, v] : kv) {
    if (k.rfind("delta_", 0) == 0) c.delta[std::stoi(k.substr(6))] = std::stod(v);
    if (k == "theta_ss") c.theta_ss = std::stod(v);
  }
  return c;
}

// Flat `key = value` config files with `#` comments. Values are injected as
// extra command-line tokens for keys the user did not pass explicitly, so
// flags always override the file.
std::vector<std::pair<std::string, std::string>> read_flat_config(
    const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open config file " + path);
  std::vector<std::pair<std::string, std::string>> kv;
  std::string line;
  auto trim = [](std::string t) {
    const auto a = t.find_first_not_of(" \t");
    const auto b = t.find_last_not_of(" \t\r");
    return a == std::string::npos ? std::string() : t.substr(a, b - a + 1);
  };
  while (std::getline(in, line)) {
    const auto hash = line.find('#');
    if (hash != std::string::npos) line = line.substr(0, hash);
    const auto eq = line.find('=');
    if (eq == std::string::npos) continue;
    kv.emplace_back(trim(line.substr(0, eq)), trim(line.substr(eq + 1)));
  }
  return kv;
}

std::vector<std::string> apply_config_file(std::vector<std::string> args) {
  std::string file;
  for (size_t i = 0; i < args.size(); ++i) {
    if (args[i] == "--config" && i + 1 < args.size()) file = args[i + 1];
    else if (args[i].rfind("--config=", 0) == 0) file = args[i].substr(9);
    else continue;
    break;
  }
  if (file.empty()) return args;
  for (const auto& [key, value] : read_flat_config(file)) {
    const std::string flag = "--" + key;
    bool present = false;
    for (const auto& a : args)
      if (a == flag || a.rfind(flag + "=", 0) == 0) present = true;
    if (present) continue;
    args.push_back(flag);
    std::istringstream vs(value);  // lists are whitespace separated
    std::string tok;
    while (vs >> tok) args.push_back(tok);
  }
  return args;
}

SignalKind parse_signal_kind(const std::string& name, int s) {
  if (name == "exact") return SignalKind::exact_sparse(s);
  if (name == "powerlaw") return SignalKind::power_law();
  if (name == "expdecay") return SignalKind::exp_decay();
  if (name == "uniform") return SignalKind::uniform_sparse(s);
  throw CLI::ValidationError("--signal", "unknown signal kind: " + name);
}

int run_gen(int n, int d, int s, double sigma, uint64_t seed,
            const std::string& matrix, const std::string& signal,
            const std::string& out) {
  const SignalKind kind = parse_signal_kind(signal, s);
  ProblemInstance inst;
  if (matrix == "gaussian") {
    inst = make_gaussian_instance(n, d, kind, sigma, seed);
  } else if (matrix == "uniform") {
    inst = make_uniform_instance(n, d, kind, sigma, seed);
  } else {
    throw CLI::ValidationError("--matrix", "unknown matrix kind: " + matrix);
  }
  inst.s_true = s;
  save_instance(out, inst, signal, sigma);
  return 0;
}

Algorithm parse_algo(const std::string& name) {
  if (name == "hpm-oracle") return Algorithm::HpmOracleNoiseless;
  if (name == "hpm-oracle-noisy") return Algorithm::HpmOracleNoisy;
  if (name == "hpm1") return Algorithm::Hpm1;
  if (name == "hpm2") return Algorithm::Hpm2;
  if (name == "ista") return Algorithm::Ista;
  if (name == "iht") return Algorithm::Iht;
  if (name == "pgh") return Algorithm::Pgh;
  throw CLI::ValidationError("--algo", "unknown algorithm: " + name);
}

void write_report(const std::string& path, const RecoveryReport& rep,
                  const IterateTrace& trace) {
  const char* term = trace.termination == Termination::MaxIters ? "max_iters"
                     : trace.termination == Termination::SparsityStop
                         ? "sparsity_stop"
                         : "plateau";
  write_meta(path, {{"final_error", format_g17(rep.full_error)},
                    {"final_top_s_error", format_g17(rep.top_s_error)},
                    {"final_top_s_projected_error", format_g17(rep.top_s_projected_error)},
                    {"support_excess", std::to_string(rep.support_excess)},
                    {"nnz", std::to_string(rep.nnz)},
                    {"iterations", std::to_string(trace.records.size())},
                    {"prox_update_count", std::to_string(trace.prox_update_count)},
                    {"termination", term}});
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{
      "Compressive-sensing solver harness: homotopy proximal-mapping solvers, "
      "ISTA/IHT/PGH baselines, exhaustive RIP probing, and CSV trace output.\n"
      "Sweep worker threads are controlled by the HPM_WORKERS environment "
      "variable (default: number of logical processors)."};
  app.require_subcommand(1);
  std::string cfg_file;  // handled by apply_config_file before parsing

  // ---- gen ----
  auto* gen = app.add_subcommand("gen", "Generate a problem instance directory");
  int g_n = 100, g_d = 400, g_s = 5;
  double g_sigma = 0.0;
  uint64_t g_seed = 0;
  std::string g_matrix = "gaussian", g_signal = "exact", g_out;
  gen->add_option("--n", g_n, "measurement count");
  gen->add_option("--d", g_d, "signal dimension");
  gen->add_option("--s", g_s, "sparsity");
  gen->add_option("--sigma", g_sigma, "uniform noise level");
  gen->add_option("--seed", g_seed, "master seed");
  gen->add_option("--matrix", g_matrix, "matrix ensemble: gaussian|uniform");
  gen->add_option("--signal", g_signal, "signal kind: exact|powerlaw|expdecay|uniform");
  gen->add_option("--out", g_out, "output directory")->required();
  gen->add_option("--config", cfg_file,
                  "flat key = value config file (flags override file values)");

  // ---- solve ----
  auto* solve = app.add_subcommand("solve", "Run one solver on an instance directory");
  std::string s_algo, s_in, s_out, s_rip_file;
  double s_eta = 0.0, s_delta1 = 0.0, s_lambda_cap = -1.0, s_lambda1 = 0.0;
  double s_ista_lambda = 0.0, s_iht_gamma = 1.0;
  double s_pgh_target = 1.0, s_pgh_dec = 0.7, s_pgh_tol = 0.2;
  int s_s = 0, s_max_iters = 200;
  solve->add_option("--algo", s_algo,
                    "hpm-oracle|hpm-oracle-noisy|hpm1|hpm2|ista|iht|pgh")
      ->required();
  solve->add_option("--in", s_in, "instance directory")->required();
  solve->add_option("--out", s_out, "output directory")->required();
  solve->add_option("--s", s_s, "target sparsity (default: instance s)");
  solve->add_option("--eta", s_eta, "contraction parameter");
  solve->add_option("--delta1", s_delta1, "initial error-bound size");
  solve->add_option("--lambda-cap", s_lambda_cap, "Lambda noise/approximation level");
  solve->add_option("--lambda1", s_lambda1, "initial lambda for geometric decay");
  solve->add_option("--max-iters", s_max_iters, "iteration budget");
  solve->add_option("--rip-file", s_rip_file, "key = value RIP constants (oracle solvers)");
  solve->add_option("--ista-lambda", s_ista_lambda, "fixed l1 weight for ista");
  solve->add_option("--iht-gamma", s_iht_gamma, "iht step is 1/gamma");
  solve->add_option("--pgh-lambda-target", s_pgh_target, "final stage lambda");
  solve->add_option("--pgh-dec-factor", s_pgh_dec, "stage decrease factor");
  solve->add_option("--pgh-inner-tol-factor", s_pgh_tol, "inner stop factor");
  solve->add_option("--config", cfg_file,
                  "flat key = value config file (flags override file values)");

  // ---- sweep ----
  auto* sweep = app.add_subcommand("sweep", "Run a named protocol or parameter sweep");
  std::string w_protocol, w_out;
  int w_n = 0, w_d = 0, w_s = 0, w_trials = 1, w_max_iters = 200;
  double w_sigma = -1.0;
  uint64_t w_seed = 0;
  std::vector<double> w_eta_list;
  std::vector<int> w_n_list;
  sweep->add_option("--protocol", w_protocol,
                    "setting1|setting2|setting3|eta|n|custom")
      ->required();
  sweep->add_option("--n", w_n, "measurement count");
  sweep->add_option("--d", w_d, "signal dimension");
  sweep->add_option("--s", w_s, "sparsity");
  sweep->add_option("--sigma", w_sigma, "noise level");
  sweep->add_option("--seed", w_seed, "master seed");
  sweep->add_option("--trials", w_trials, "seeded trials per configuration");
  sweep->add_option("--max-iters", w_max_iters, "iteration budget");
  sweep->add_option("--eta-list", w_eta_list, "eta values for the eta sweep");
  sweep->add_option("--n-list", w_n_list, "n values for the n sweep");
  sweep->add_option("--out", w_out, "output directory")->required();
  sweep->add_option("--config", cfg_file,
                  "flat key = value config file (flags override file values)");

  // ---- rip ----
  auto* rip = app.add_subcommand("rip", "Exhaustive RIP constants of a small matrix");
  std::string r_matrix, r_out;
  int r_s = 1;
  rip->add_option("--matrix", r_matrix, "matrix CSV file")->required();
  rip->add_option("--s", r_s, "sparsity level");
  rip->add_option("--out", r_out, "also write the constants to this file");
  rip->add_option("--config", cfg_file,
                  "flat key = value config file (flags override file values)");

  // ---- compare ----
  auto* compare = app.add_subcommand(
      "compare", "Geometric-decay homotopy solver vs PGH or ISTA/IHT baselines");
  std::string c_which = "pgh", c_out;
  int c_n = 0, c_d = 0, c_s = 0, c_trials = 1, c_max_iters = 400;
  double c_sigma = -1.0, c_eta = 0.185;
  uint64_t c_seed = 0;
  compare->add_option("--against", c_which, "pgh|baselines");
  compare->add_option("--n", c_n, "measurement count");
  compare->add_option("--d", c_d, "signal dimension");
  compare->add_option("--s", c_s, "sparsity");
  compare->add_option("--sigma", c_sigma, "noise level");
  compare->add_option("--eta", c_eta, "contraction parameter");
  compare->add_option("--seed", c_seed, "master seed");
  compare->add_option("--trials", c_trials, "seeded trials");
  compare->add_option("--max-iters", c_max_iters, "iteration budget");
  compare->add_option("--out", c_out, "output directory")->required();
  compare->add_option("--config", cfg_file,
                  "flat key = value config file (flags override file values)");

  try {
    std::vector<std::string> raw(argv + 1, argv + argc);
    std::vector<std::string> args = apply_config_file(raw);
    std::vector<const char*> ptrs{argv[0]};
    for (const std::string& a : args) ptrs.push_back(a.c_str());
    app.parse(static_cast<int>(ptrs.size()), ptrs.data());

    if (*gen) return run_gen(g_n, g_d, g_s, g_sigma, g_seed, g_matrix, g_signal, g_out);

    if (*solve) {
      SolverConfig sc;
      sc.algorithm = parse_algo(s_algo);
      const ProblemInstance inst = load_instance(s_in);
      sc.s = s_s > 0 ? s_s : std::max(inst.s_true, 1);
      sc.max_iters = s_max_iters;
      if (s_eta > 0.0) sc.eta = s_eta;
      if (s_lambda_cap >= 0.0) sc.lambda_cap = s_lambda_cap;
      sc.lambda1 = s_lambda1;
      sc.ista_lambda = s_ista_lambda;
      sc.iht_gamma = s_iht_gamma;
      sc.pgh_lambda_target = s_pgh_target;
      sc.pgh_dec_factor = s_pgh_dec;
      sc.pgh_inner_tol_factor = s_pgh_tol;
      const double uty_inf = norms(matvec_transpose(inst.U, inst.y)).linf;
      sc.delta1 = s_delta1 > 0.0
                      ? s_delta1
                      : uty_inf * std::sqrt(static_cast<double>(sc.s));
      if (sc.algorithm == Algorithm::Hpm2 && sc.lambda1 <= 0.0) sc.lambda1 = uty_inf;
      if (sc.algorithm == Algorithm::HpmOracleNoiseless ||
          sc.algorithm == Algorithm::HpmOracleNoisy) {
        if (s_rip_file.empty())
          throw ContractViolation("solve: oracle solvers require --rip-file");
        sc.rip = load_rip_file(s_rip_file);
        if (sc.algorithm == Algorithm::HpmOracleNoisy)
          sc.ut_e_inf = norms(matvec_transpose(inst.U, inst.e)).linf;
      }
      const IterateTrace trace = run_solver(inst, sc);
      std::filesystem::create_directories(s_out);
      write_trace_csv(s_out + "/trace.csv", trace);
      write_report(s_out + "/report",
                   recovery_report(trace.final_x, inst.x_star, sc.s), trace);
      write_meta(s_out + "/meta",
                 {{"algo", s_algo},
                  {"in", s_in},
                  {"s", std::to_string(sc.s)},
                  {"eta", format_g17(sc.eta)},
                  {"delta1", format_g17(sc.delta1)},
                  {"lambda_cap", format_g17(sc.lambda_cap)},
                  {"max_iters", std::to_string(sc.max_iters)}});
      return 0;
    }

    if (*sweep) {
      ExperimentConfig ec;
      if (w_protocol == "setting1") ec.protocol = Protocol::Setting1;
      else if (w_protocol == "setting2") ec.protocol = Protocol::Setting2;
      else if (w_protocol == "setting3") ec.protocol = Protocol::Setting3;
      else if (w_protocol == "eta") ec.protocol = Protocol::EtaSweep;
      else if (w_protocol == "n") ec.protocol = Protocol::NSweep;
      else if (w_protocol == "custom") ec.protocol = Protocol::Custom;
      else throw CLI::ValidationError("--protocol", "unknown protocol: " + w_protocol);
      ec.n = w_n;
      ec.d = w_d;
      ec.s = w_s;
      ec.sigma = w_sigma;
      ec.seed = w_seed;
      ec.trials = w_trials;
      ec.eta_list = w_eta_list;
      ec.n_list = w_n_list;
      ec.solver.max_iters = w_max_iters;
      ec.output_dir = w_out;
      run_protocol(ec);
      return 0;
    }

    if (*rip) {
      const DenseMatrix U = read_matrix_csv(r_matrix);
      const RipConstants c = compute_rip_constants(U, r_s);
      const GammaResult g = gamma_condition(c, r_s);
      std::vector<std::pair<std::string, std::string>> lines;
      for (const auto& [k, v] : c.delta)
        lines.emplace_back("delta_" + std::to_string(k), format_g17(v));
      lines.emplace_back("theta_ss", format_g17(c.theta_ss));
      lines.emplace_back("s", std::to_string(r_s));
      lines.emplace_back("gamma", format_g17(g.gamma));
      lines.emplace_back("gamma_satisfied", g.satisfied ? "true" : "false");
      for (const auto& [k, v] : lines) std::cout << k << " = " << v << "\n";
      if (!r_out.empty()) write_meta(r_out, lines);
      return 0;
    }

    if (*compare) {
      ExperimentConfig ec;
      if (c_which == "pgh") ec.protocol = Protocol::PghCompare;
      else if (c_which == "baselines") ec.protocol = Protocol::BaselineCompare;
      else throw CLI::ValidationError("--against", "unknown target: " + c_which);
      ec.n = c_n;
      ec.d = c_d;
      ec.s = c_s;
      ec.sigma = c_sigma;
      ec.seed = c_seed;
      ec.trials = c_trials;
      ec.solver.algorithm = Algorithm::Hpm2;
      ec.solver.eta = c_eta;
      ec.solver.max_iters = c_max_iters;
      ec.output_dir = c_out;
      run_protocol(ec);
      return 0;
    }
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 1;
  } catch (const hpm::ContractViolation& e) {
    std::cerr << "contract violation: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 1;
}
