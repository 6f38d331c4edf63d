#pragma once

#include <optional>
#include <string>
#include <vector>

#include "hpm/solvers.hpp"

namespace hpm {

inline constexpr const char* kTraceHeader =
    "iter,lambda,error_l2,error_top_s,nnz,support_excess,objective";

// One row per iteration under the fixed header; floats as "%.17g"; quantities
// that do not exist for a run (no ground truth, no lambda, ...) are written
// as empty fields.
void write_trace_csv(const std::string& path, const IterateTrace& trace);

struct TraceRow {
  int iter = 0;
  std::optional<double> lambda, error_l2, error_top_s, objective;
  std::optional<long long> nnz, support_excess;
};

std::vector<TraceRow> read_trace_csv(const std::string& path);

// Flat `key = value` lines; '#' starts a comment.
void write_meta(const std::string& path,
                const std::vector<std::pair<std::string, std::string>>& entries);

}  // namespace hpm
