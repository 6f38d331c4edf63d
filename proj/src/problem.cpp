#include "hpm/problem.hpp"

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <map>
#include <numeric>
#include <sstream>
#include <stdexcept>

#include "hpm/random.hpp"

namespace hpm {

std::string format_g17(double x) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", x);
  return buf;
}

DenseMatrix gen_gaussian_matrix(int n, int d, uint64_t seed) {
  if (n < 1 || d < 1) throw std::invalid_argument("gen_gaussian_matrix: n, d must be >= 1");
  DenseMatrix U(n, d);
  Rng rng(seed);
  const double scale = 1.0 / std::sqrt(static_cast<double>(n));
  for (double& v : U.data) v = scale * rng.normal();
  return U;
}

DenseMatrix gen_uniform_matrix(int n, int d, uint64_t seed) {
  if (n < 1 || d < 1) throw std::invalid_argument("gen_uniform_matrix: n, d must be >= 1");
  DenseMatrix U(n, d);
  Rng rng(seed);
  const double scale = std::sqrt(3.0 / n);
  for (double& v : U.data) v = scale * rng.uniform(-1.0, 1.0);
  return U;
}

namespace {

// First s entries of a partial Fisher-Yates shuffle of 0..d-1.
std::vector<int> draw_support(int d, int s, Rng& rng) {
  std::vector<int> idx(d);
  std::iota(idx.begin(), idx.end(), 0);
  for (int i = 0; i < s; ++i) {
    const int j = i + static_cast<int>(rng.below(static_cast<uint64_t>(d - i)));
    std::swap(idx[i], idx[j]);
  }
  idx.resize(s);
  return idx;
}

}  // namespace

DenseVector gen_signal(int d, SignalKind kind, uint64_t seed) {
  if (d < 1) throw std::invalid_argument("gen_signal: d must be >= 1");
  DenseVector x(d, 0.0);
  switch (kind.kind) {
    case SignalKind::Kind::ExactSparse: {
      if (kind.s < 1 || kind.s > d)
        throw std::invalid_argument("gen_signal: ExactSparse s out of range");
      Rng rng(seed);
      const auto pos = draw_support(d, kind.s, rng);
      for (int p : pos) x[p] = rng.normal();
      const double nrm = norm2(x);
      for (double& v : x) v /= nrm;
      break;
    }
    case SignalKind::Kind::PowerLaw: {
      for (int i = 0; i < d; ++i) x[i] = 1.0 / (i + 1);
      const double nrm = norm2(x);
      for (double& v : x) v /= nrm;
      break;
    }
    case SignalKind::Kind::ExpDecay: {
      for (int i = 0; i < d; ++i) x[i] = std::exp(-(i + 1.0));
      break;
    }
    case SignalKind::Kind::UniformSparse: {
      if (kind.s < 1 || kind.s > d)
        throw std::invalid_argument("gen_signal: UniformSparse s out of range");
      Rng rng(seed);
      const auto pos = draw_support(d, kind.s, rng);
      for (int p : pos) x[p] = rng.uniform(-1.0, 1.0);
      break;
    }
  }
  return x;
}

DenseVector gen_uniform_noise(int n, double sigma, uint64_t seed) {
  if (n < 1) throw std::invalid_argument("gen_uniform_noise: n must be >= 1");
  if (sigma < 0.0) throw std::invalid_argument("gen_uniform_noise: sigma must be >= 0");
  DenseVector e(n, 0.0);
  if (sigma == 0.0) return e;
  Rng rng(seed);
  for (double& v : e) v = rng.uniform(-sigma, sigma);
  return e;
}

ProblemInstance assemble(const DenseMatrix& U, const DenseVector& x_star,
                         const DenseVector& e) {
  if (static_cast<int>(x_star.size()) != U.cols)
    throw std::invalid_argument("assemble: x_star.length != U.cols");
  if (static_cast<int>(e.size()) != U.rows)
    throw std::invalid_argument("assemble: e.length != U.rows");
  ProblemInstance inst;
  inst.U = U;
  inst.x_star = x_star;
  inst.e = e;
  inst.y = matvec(U, x_star);
  for (int i = 0; i < U.rows; ++i) inst.y[i] += e[i];
  inst.s_true = static_cast<int>(norms(x_star).l0);
  return inst;
}

namespace {

void write_vector_csv(const std::string& path, const DenseVector& v) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open " + path + " for writing");
  for (double x : v) out << format_g17(x) << "\n";
}

DenseVector read_vector_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path);
  DenseVector v;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    v.push_back(std::stod(line));
  }
  return v;
}

}  // namespace

void save_instance(const std::string& dir, const ProblemInstance& inst,
                   const std::string& kind_name, double sigma) {
  std::filesystem::create_directories(dir);
  {
    std::ofstream out(dir + "/U.csv");
    if (!out) throw std::runtime_error("cannot open " + dir + "/U.csv for writing");
    for (int i = 0; i < inst.U.rows; ++i) {
      for (int j = 0; j < inst.U.cols; ++j) {
        if (j) out << ",";
        out << format_g17(inst.U(i, j));
      }
      out << "\n";
    }
  }
  write_vector_csv(dir + "/x_star.csv", inst.x_star);
  write_vector_csv(dir + "/e.csv", inst.e);
  write_vector_csv(dir + "/y.csv", inst.y);
  std::ofstream meta(dir + "/meta");
  if (!meta) throw std::runtime_error("cannot open " + dir + "/meta for writing");
  meta << "n = " << inst.U.rows << "\n";
  meta << "d = " << inst.U.cols << "\n";
  meta << "s = " << inst.s_true << "\n";
  meta << "kind = " << kind_name << "\n";
  meta << "sigma = " << format_g17(sigma) << "\n";
  meta << "seed = " << inst.seed << "\n";
}

DenseMatrix read_matrix_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path);
  std::vector<std::vector<double>> rows;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::vector<double> row;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) row.push_back(std::stod(cell));
    rows.push_back(std::move(row));
  }
  if (rows.empty()) throw std::runtime_error(path + " is empty");
  DenseMatrix U(static_cast<int>(rows.size()), static_cast<int>(rows[0].size()));
  for (int i = 0; i < U.rows; ++i) {
    if (static_cast<int>(rows[i].size()) != U.cols)
      throw std::runtime_error(path + " has ragged rows");
    for (int j = 0; j < U.cols; ++j) U(i, j) = rows[i][j];
  }
  return U;
}

ProblemInstance load_instance(const std::string& dir) {
  ProblemInstance inst;
  inst.U = read_matrix_csv(dir + "/U.csv");
  std::string line;
  inst.x_star = read_vector_csv(dir + "/x_star.csv");
  inst.e = read_vector_csv(dir + "/e.csv");
  inst.y = read_vector_csv(dir + "/y.csv");
  if (static_cast<int>(inst.x_star.size()) != inst.U.cols ||
      static_cast<int>(inst.e.size()) != inst.U.rows ||
      static_cast<int>(inst.y.size()) != inst.U.rows)
    throw std::runtime_error(dir + ": inconsistent instance dimensions");
  std::ifstream meta(dir + "/meta");
  if (meta) {
    while (std::getline(meta, line)) {
      const auto eq = line.find('=');
      if (eq == std::string::npos) continue;
      auto trim = [](std::string t) {
        const auto a = t.find_first_not_of(" \t");
        const auto b = t.find_last_not_of(" \t\r");
        return a == std::string::npos ? std::string() : t.substr(a, b - a + 1);
      };
      const std::string key = trim(line.substr(0, eq));
      const std::string val = trim(line.substr(eq + 1));
      if (key == "s") inst.s_true = std::stoi(val);
      if (key == "seed") inst.seed = std::stoull(val);
    }
  }
  return inst;
}

}  // namespace hpm
