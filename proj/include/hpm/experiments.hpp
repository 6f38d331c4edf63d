#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "hpm/problem.hpp"
#include "hpm/solvers.hpp"

namespace hpm {

/// Named experiment protocols. Setting1-3 are the noiseless / noisy /
/// near-sparse recovery settings; EtaSweep and NSweep vary the contraction
/// parameter and the number of measurements; PghCompare and BaselineCompare
/// pit the geometric-decay homotopy solver against PGH and ISTA/IHT on the
/// uniform-matrix protocol; Custom runs the caller's SolverConfig as-is.
enum class Protocol {
  Setting1,
  Setting2,
  Setting3,
  EtaSweep,
  NSweep,
  PghCompare,
  BaselineCompare,
  Custom,
};

struct ExperimentConfig {
  Protocol protocol = Protocol::Setting1;
  int n = 0;            // 0 means protocol default
  int d = 0;
  int s = 0;
  double sigma = -1.0;  // < 0 means protocol default
  uint64_t seed = 0;
  int trials = 1;
  SolverConfig solver;  // consumed by Custom; max_iters honored everywhere
  std::vector<double> eta_list;
  std::vector<int> n_list;
  std::string output_dir;
};

// Environment variable controlling the sweep worker-thread count.
inline constexpr const char* kWorkersEnvVar = "HPM_WORKERS";

// Seeded instance builders used by the protocols. Sub-seeds for the matrix,
// signal, and noise are derived from `seed` with the documented mixer.
ProblemInstance make_gaussian_instance(int n, int d, SignalKind kind, double sigma,
                                       uint64_t seed);
// Uniform-matrix protocol: the unscaled system (entries, signal nonzeros, and
// noise all uniform) premultiplied by sqrt(3/n), so U has variance 1/n and the
// effective noise is sqrt(3/n) * uniform[-sigma, sigma].
ProblemInstance make_uniform_instance(int n, int d, SignalKind kind, double sigma,
                                      uint64_t seed);

// Runs the configured protocol: one subdirectory per trial (and per swept
// value) holding trace.csv + meta, plus a protocol-level summary.csv and meta.
// Re-running with an identical config produces byte-identical files.
void run_protocol(const ExperimentConfig& cfg);

int worker_count();

}  // namespace hpm
