#include "hpm/trace_io.hpp"

#include <cmath>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "hpm/problem.hpp"

namespace hpm {

namespace {

std::string field(double v) { return std::isnan(v) ? std::string() : format_g17(v); }

}  // namespace

void write_trace_csv(const std::string& path, const IterateTrace& trace) {
  if (trace.records.empty())
    throw std::invalid_argument("write_trace_csv: trace has no iterations");
  std::ofstream out(path);
  if (!out) throw std::runtime_error("write_trace_csv: cannot open " + path);
  out << kTraceHeader << "\n";
  for (const IterRecord& r : trace.records) {
    out << r.t << "," << field(r.lambda) << "," << field(r.error_l2) << ","
        << field(r.error_top_s) << "," << r.nnz << ","
        << (r.support_excess < 0 ? std::string() : std::to_string(r.support_excess)) << ","
        << field(r.objective) << "\n";
  }
  if (!out) throw std::runtime_error("write_trace_csv: write failed for " + path);
}

std::vector<TraceRow> read_trace_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("read_trace_csv: cannot open " + path);
  std::string line;
  if (!std::getline(in, line)) throw std::runtime_error("read_trace_csv: empty file " + path);
  if (line != kTraceHeader)
    throw std::runtime_error("read_trace_csv: unexpected header in " + path);
  std::vector<TraceRow> rows;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::vector<std::string> cells;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) cells.push_back(cell);
    cells.resize(7);
    TraceRow row;
    row.iter = std::stoi(cells[0]);
    auto opt_d = [](const std::string& s) -> std::optional<double> {
      if (s.empty()) return std::nullopt;
      return std::stod(s);
    };
    auto opt_i = [](const std::string& s) -> std::optional<long long> {
      if (s.empty()) return std::nullopt;
      return std::stoll(s);
    };
    row.lambda = opt_d(cells[1]);
    row.error_l2 = opt_d(cells[2]);
    row.error_top_s = opt_d(cells[3]);
    row.nnz = opt_i(cells[4]);
    row.support_excess = opt_i(cells[5]);
    row.objective = opt_d(cells[6]);
    rows.push_back(row);
  }
  return rows;
}

void write_meta(const std::string& path,
                const std::vector<std::pair<std::string, std::string>>& entries) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("write_meta: cannot open " + path);
  for (const auto& [k, v] : entries) out << k << " = " << v << "\n";
}

}  // namespace hpm
