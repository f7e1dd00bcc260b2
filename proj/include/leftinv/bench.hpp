#pragma once

#include "leftinv/algebra.hpp"
#include "leftinv/geometry.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <limits>
#include <random>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

namespace leftinv {

enum class BenchGroup { Se3, So3 };
enum class BenchScheme { Rk2, Rk4, Pole };

inline const char* scheme_name(BenchScheme s) {
  switch (s) {
    case BenchScheme::Rk2: return "rk2";
    case BenchScheme::Rk4: return "rk4";
    case BenchScheme::Pole: return "pole";
  }
  return "?";
}

inline BenchScheme parse_scheme(const std::string& name) {
  if (name == "rk2") return BenchScheme::Rk2;
  if (name == "rk4") return BenchScheme::Rk4;
  if (name == "pole") return BenchScheme::Pole;
  throw std::invalid_argument("unknown scheme: " + name);
}

/// Configuration of one convergence run. The step grid must be strictly
/// increasing and the reference step count at least as large as its maximum.
struct BenchConfig {
  BenchGroup group = BenchGroup::Se3;
  double beta = 1.5;
  std::vector<BenchScheme> schemes = {BenchScheme::Rk2, BenchScheme::Rk4, BenchScheme::Pole};
  std::vector<int> n_grid = {};  // empty -> default_grid()
  std::uint64_t seed = 42;
  int reference_steps = 2000;
  std::string output_path = "convergence.csv";
};

/// Geometrically spaced integer step counts, rounded and forced strictly
/// increasing.
inline std::vector<int> geometric_grid(int n_min, int n_max, int count) {
  if (n_min < 1 || n_max < n_min || count < 1)
    throw std::invalid_argument("geometric_grid: invalid range");
  std::vector<int> grid;
  grid.reserve(count);
  for (int k = 0; k < count; ++k) {
    const double frac = count == 1 ? 0.0 : static_cast<double>(k) / (count - 1);
    int n = static_cast<int>(std::lround(n_min * std::pow(static_cast<double>(n_max) / n_min, frac)));
    if (!grid.empty()) n = std::max(n, grid.back() + 1);
    grid.push_back(n);
  }
  return grid;
}

inline std::vector<int> default_grid() { return geometric_grid(10, 1000, 16); }

inline void validate(const BenchConfig& cfg) {
  if (!(cfg.beta > 0.0)) throw std::invalid_argument("beta must be positive");
  if (cfg.schemes.empty()) throw std::invalid_argument("no schemes selected");
  const std::vector<int>& grid = cfg.n_grid.empty() ? default_grid() : cfg.n_grid;
  for (std::size_t i = 0; i < grid.size(); ++i) {
    if (grid[i] < 1) throw std::invalid_argument("step counts must be >= 1");
    if (i > 0 && grid[i] <= grid[i - 1])
      throw std::invalid_argument("n_grid must be strictly increasing");
  }
  if (cfg.reference_steps < grid.back())
    throw std::invalid_argument("reference_steps must cover the grid");
}

/// One benchmark row: endpoint transport error of a scheme at a step count
/// against the reference solution, in the metric norm. A NaN error marks a
/// non-convergent pole-ladder cell.
struct ConvergenceRecord {
  std::string scheme;
  double beta = 0.0;
  int n = 0;
  double error = 0.0;
  double wall_time_s = 0.0;
};

namespace detail {

// Deterministic uniform draws: mt19937_64 output mapped to [0,1) explicitly,
// so runs are reproducible across standard libraries.
struct SeededRng {
  std::mt19937_64 gen;
  explicit SeededRng(std::uint64_t seed) : gen(seed) {}
  double uniform() { return static_cast<double>(gen() >> 11) * 0x1.0p-53; }
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }
  Eigen::VectorXd vector(int n, double lo, double hi) {
    Eigen::VectorXd v(n);
    for (int i = 0; i < n; ++i) v[i] = uniform(lo, hi);
    return v;
  }
  Eigen::VectorXd unit_vector(int n) {
    Eigen::VectorXd v = vector(n, -1.0, 1.0);
    return v / v.norm();
  }
};

} // namespace detail

/// Runs the convergence experiment: a seeded unit direction and unit vector
/// are transported from the identity; every (scheme, n) cell is compared to a
/// high-resolution RK4 reference in the metric norm. Deterministic given the
/// seed; a non-convergent pole-ladder cell is recorded with a NaN error and
/// the run continues.
inline std::vector<ConvergenceRecord> run_convergence(const BenchConfig& cfg) {
  validate(cfg);
  const std::vector<int> grid = cfg.n_grid.empty() ? default_grid() : cfg.n_grid;
  const LieGroupStructure s =
      cfg.group == BenchGroup::Se3 ? build_se3_structure(cfg.beta) : build_so3_structure();

  detail::SeededRng rng(cfg.seed);
  const AlgebraVector direction = rng.unit_vector(s.dim());
  const AlgebraVector zeta0 = rng.unit_vector(s.dim());
  const GroupElement base = identity(s);

  const AlgebraVector reference =
      parallel_transport_geodesic(s, base, direction, zeta0, cfg.reference_steps,
                                  IntegratorScheme::RK4)
          .zeta;

  std::vector<ConvergenceRecord> records;
  records.reserve(cfg.schemes.size() * grid.size());
  for (const BenchScheme scheme : cfg.schemes) {
    for (const int n : grid) {
      ConvergenceRecord rec;
      rec.scheme = scheme_name(scheme);
      rec.beta = cfg.group == BenchGroup::Se3 ? cfg.beta : 1.0;
      rec.n = n;
      const auto start = std::chrono::steady_clock::now();
      try {
        AlgebraVector endpoint;
        switch (scheme) {
          case BenchScheme::Rk2:
            endpoint = parallel_transport_geodesic(s, base, direction, zeta0, n,
                                                   IntegratorScheme::RK2)
                           .zeta;
            break;
          case BenchScheme::Rk4:
            endpoint = parallel_transport_geodesic(s, base, direction, zeta0, n,
                                                   IntegratorScheme::RK4)
                           .zeta;
            break;
          case BenchScheme::Pole:
            endpoint = pole_ladder(s, base, direction, zeta0, n);
            break;
        }
        rec.error = (endpoint - reference).norm();
      } catch (const NonConvergenceError&) {
        rec.error = std::numeric_limits<double>::quiet_NaN();
      }
      rec.wall_time_s =
          std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
      records.push_back(std::move(rec));
    }
  }
  std::sort(records.begin(), records.end(), [](const ConvergenceRecord& a,
                                               const ConvergenceRecord& b) {
    if (a.scheme != b.scheme) return a.scheme < b.scheme;
    return a.n < b.n;
  });
  return records;
}

/// Least-squares slope of log(error) against log(n), negated so that an
/// order-p scheme reports about p. Rows at or below the floor of 100 machine
/// epsilons, and NaN rows, are excluded; at least 3 valid rows are required.
inline double fit_slope(const std::vector<ConvergenceRecord>& records) {
  const double floor = 100.0 * std::numeric_limits<double>::epsilon();
  std::vector<double> xs, ys;
  for (const auto& r : records) {
    if (!std::isfinite(r.error) || r.error < floor) continue;
    xs.push_back(std::log(static_cast<double>(r.n)));
    ys.push_back(std::log(r.error));
  }
  if (xs.size() < 3)
    throw std::invalid_argument("fit_slope: need at least 3 records above the error floor");
  const double n = static_cast<double>(xs.size());
  double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    sx += xs[i];
    sy += ys[i];
    sxx += xs[i] * xs[i];
    sxy += xs[i] * ys[i];
  }
  return -(n * sxy - sx * sy) / (n * sxx - sx * sx);
}

/// Writes records as CSV with a fixed header; numbers carry 17 significant
/// digits so that reading them back is lossless.
inline void write_csv(const std::vector<ConvergenceRecord>& records, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open for writing: " + path);
  out << "scheme,beta,n,error,wall_time_s\n";
  char buf[64];
  for (const auto& r : records) {
    out << r.scheme << ',';
    std::snprintf(buf, sizeof buf, "%.17g", r.beta);
    out << buf << ',' << r.n << ',';
    if (std::isfinite(r.error))
      std::snprintf(buf, sizeof buf, "%.17g", r.error);
    else
      std::snprintf(buf, sizeof buf, "nan");
    out << buf << ',';
    std::snprintf(buf, sizeof buf, "%.17g", r.wall_time_s);
    out << buf << '\n';
  }
  if (!out) throw std::runtime_error("write failed: " + path);
}

inline std::vector<ConvergenceRecord> read_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open for reading: " + path);
  std::string line;
  if (!std::getline(in, line) || line != "scheme,beta,n,error,wall_time_s")
    throw std::runtime_error("bad CSV header in " + path);
  std::vector<ConvergenceRecord> records;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::stringstream ss(line);
    std::string field;
    ConvergenceRecord r;
    auto next = [&] {
      if (!std::getline(ss, field, ',')) throw std::runtime_error("malformed CSV row: " + line);
      return field;
    };
    r.scheme = next();
    r.beta = std::stod(next());
    r.n = std::stoi(next());
    r.error = std::stod(next());
    r.wall_time_s = std::stod(next());
    records.push_back(std::move(r));
  }
  return records;
}

} // namespace leftinv
