// Convergence benchmark: transports a seeded tangent vector along a seeded
// geodesic with RK2, RK4 and the pole ladder at a grid of step counts,
// compares each endpoint to a high-resolution RK4 reference, and writes the
// rows as CSV. With --assert-orders the fitted log-log slopes must land in
// the expected order bands (2, 4, 2) or the run exits nonzero.

#include "leftinv/bench.hpp"

#include <CLI11.hpp>

#include <cstdio>
#include <exception>
#include <map>
#include <sstream>
#include <string>
#include <vector>

namespace {

struct SlopeBand {
  double lo, hi;
};

const std::map<std::string, SlopeBand> kExpectedOrders = {
    {"rk2", {1.7, 2.3}},
    {"rk4", {3.5, 4.5}},
    {"pole", {1.6, 2.4}},
};

std::vector<std::string> split_csv_list(const std::string& text) {
  std::vector<std::string> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ','))
    if (!item.empty()) out.push_back(item);
  return out;
}

} // namespace

int main(int argc, char** argv) {
  CLI::App app{"Parallel transport convergence benchmark"};

  std::string group = "se3";
  std::string schemes = "rk2,rk4,pole";
  double beta = 1.5;
  int n_min = 10;
  int n_max = 1000;
  int n_count = 16;
  std::uint64_t seed = 42;
  int reference_steps = 2000;
  std::string output = "convergence.csv";
  bool assert_orders = false;

  app.add_option("--group", group, "Group: se3 or so3")->capture_default_str();
  app.add_option("--beta", beta, "Metric anisotropy (se3 only)")->capture_default_str();
  app.add_option("--schemes", schemes, "Comma list from rk2,rk4,pole")->capture_default_str();
  app.add_option("--n-min", n_min, "Smallest step count")->capture_default_str();
  app.add_option("--n-max", n_max, "Largest step count")->capture_default_str();
  app.add_option("--n-count", n_count, "Number of grid points")->capture_default_str();
  app.add_option("--seed", seed, "RNG seed for the test inputs")->capture_default_str();
  app.add_option("--reference-steps", reference_steps, "Steps of the RK4 reference")
      ->capture_default_str();
  app.add_option("--output", output, "CSV output path")->capture_default_str();
  app.add_flag("--assert-orders", assert_orders,
               "Exit 1 unless fitted slopes are rk2 in [1.7,2.3], rk4 in [3.5,4.5], "
               "pole in [1.6,2.4]");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  leftinv::BenchConfig cfg;
  std::vector<leftinv::ConvergenceRecord> records;
  try {
    if (group == "se3")
      cfg.group = leftinv::BenchGroup::Se3;
    else if (group == "so3")
      cfg.group = leftinv::BenchGroup::So3;
    else
      throw std::invalid_argument("unknown group: " + group);
    cfg.beta = beta;
    cfg.schemes.clear();
    for (const auto& name : split_csv_list(schemes))
      cfg.schemes.push_back(leftinv::parse_scheme(name));
    cfg.n_grid = leftinv::geometric_grid(n_min, n_max, n_count);
    cfg.seed = seed;
    cfg.reference_steps = reference_steps;
    cfg.output_path = output;
    leftinv::validate(cfg);

    records = leftinv::run_convergence(cfg);
    leftinv::write_csv(records, cfg.output_path);
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: invalid configuration: %s\n", e.what());
    return 2;
  }

  std::printf("%-6s %8s %6s %14s %12s\n", "scheme", "beta", "n", "error", "time_s");
  for (const auto& r : records)
    std::printf("%-6s %8g %6d %14.6e %12.4e\n", r.scheme.c_str(), r.beta, r.n, r.error,
                r.wall_time_s);
  std::printf("wrote %zu records to %s\n", records.size(), cfg.output_path.c_str());

  bool ok = true;
  for (const auto& scheme : cfg.schemes) {
    const std::string name = leftinv::scheme_name(scheme);
    std::vector<leftinv::ConvergenceRecord> rows;
    for (const auto& r : records)
      if (r.scheme == name) rows.push_back(r);
    std::string verdict;
    try {
      const double slope = leftinv::fit_slope(rows);
      const SlopeBand band = kExpectedOrders.at(name);
      const bool in_band = slope >= band.lo && slope <= band.hi;
      std::printf("slope[%s] = %.3f (expected [%.1f, %.1f])%s\n", name.c_str(), slope,
                  band.lo, band.hi, in_band ? "" : "  OUT OF BAND");
      if (!in_band) ok = false;
    } catch (const std::exception& e) {
      std::printf("slope[%s] = n/a (%s)\n", name.c_str(), e.what());
      ok = false;
    }
  }

  if (assert_orders && !ok) {
    std::fprintf(stderr, "error: fitted convergence orders outside expected bands\n");
    return 1;
  }
  return 0;
}
