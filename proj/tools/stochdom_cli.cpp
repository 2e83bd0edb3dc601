// stochdom: command-line front end for the dominance checks.

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "stochdom/report.hpp"

namespace {

constexpr int kUsageError = 3;

std::vector<double> parse_list(const std::string& text, const char* flag) {
  std::vector<double> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    std::size_t used = 0;
    double value = 0.0;
    try {
      value = std::stod(item, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used == 0 || used != item.size())
      throw std::invalid_argument(std::string(flag) + ": bad number '" + item + "'");
    out.push_back(value);
  }
  if (out.empty()) throw std::invalid_argument(std::string(flag) + ": empty list");
  return out;
}

Eigen::VectorXd to_vector(const std::vector<double>& xs) {
  return Eigen::Map<const Eigen::VectorXd>(xs.data(), static_cast<Eigen::Index>(xs.size()));
}

stochdom::CountVector parse_counts(const std::string& text) {
  const std::vector<double> raw = parse_list(text, "--counts");
  stochdom::CountVector out(static_cast<Eigen::Index>(raw.size()));
  for (std::size_t i = 0; i < raw.size(); ++i) {
    if (raw[i] < 0.0 || raw[i] != static_cast<double>(static_cast<std::int64_t>(raw[i])))
      throw std::invalid_argument("--counts: entries must be non-negative integers");
    out(static_cast<Eigen::Index>(i)) = static_cast<std::int64_t>(raw[i]);
  }
  return out;
}

stochdom::Grid parse_grid(const std::string& text) {
  std::stringstream ss(text);
  std::string lo, hi, points;
  if (!std::getline(ss, lo, ':') || !std::getline(ss, hi, ':') || !std::getline(ss, points) ||
      !ss.eof())
    throw std::invalid_argument("--grid: expected lo:hi:points");
  return stochdom::Grid(std::stod(lo), std::stod(hi), std::stoi(points));
}

int emit(const stochdom::Report& report, const std::string& csv_path) {
  std::cout << report.doc.dump(2) << '\n';
  if (!csv_path.empty()) {
    std::ofstream out(csv_path);
    if (!out) throw std::runtime_error("cannot open " + csv_path + " for writing");
    out << report.csv;
  }
  return report.exit_code;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Stochastic dominance checks for Dirichlet, Beta and Gaussian beliefs"};
  app.require_subcommand(1);

  std::string alpha, v, counts, grid, csv, s_values = "2,3,5";
  std::uint64_t seed = 0, sweep_seed = 42;
  std::size_t samples = stochdom::default_samples();
  double a = 0.0, b = 0.0;
  int n_configs = 200;
  double sum_alpha_min = 2.0;
  std::size_t n = 1000000, bins = 20;

  auto* check = app.add_subcommand("check", "Verify one belief against its matched Gaussian");
  check->add_option("--alpha", alpha, "Dirichlet parameters, comma separated")->required();
  check->add_option("--v", v, "Outcome values in [0, 1], comma separated")->required();
  check->add_option("--counts", counts, "Observation counts per category");
  check->add_option("--seed", seed, "Master seed");
  check->add_option("--samples", samples, "Monte Carlo samples");
  check->add_option("--grid", grid, "lo:hi:points");
  check->add_option("--csv", csv, "Write flat CSV rows here");

  auto* sweep = app.add_subcommand("sweep", "Randomised verification over many beliefs");
  sweep->add_option("--configs", n_configs, "Number of random beliefs");
  sweep->add_option("--s-values", s_values, "Category counts to cycle through");
  sweep->add_option("--sum-alpha-min", sum_alpha_min, "Lower bound on sum of alpha");
  sweep->add_option("--seed", sweep_seed, "Master seed");
  sweep->add_option("--samples", samples, "Monte Carlo samples per case");
  sweep->add_option("--alpha", alpha, "Force every case to this alpha");
  sweep->add_option("--v", v, "Force every case to these values");
  sweep->add_option("--grid", grid, "lo:hi:points");
  sweep->add_option("--csv", csv, "Write flat CSV rows here");

  auto* cert = app.add_subcommand("cert", "Single-crossing certificate for Beta(a, b)");
  cert->add_option("a", a, "First Beta parameter")->required();
  cert->add_option("b", b, "Second Beta parameter")->required();

  auto* example1 = app.add_subcommand("example1", "SSD without single crossing");
  example1->add_option("--grid", grid, "lo:hi:points");
  example1->add_option("--csv", csv, "Write x,F_X,F_Y here");

  auto* couple = app.add_subcommand("couple", "Coupling diagnostics for the Beta projection");
  couple->add_option("--alpha", alpha, "Dirichlet parameters")->required();
  couple->add_option("--v", v, "Outcome values")->required();
  couple->add_option("--n", n, "Coupled draws");
  couple->add_option("--bins", bins, "Equal-count bins");
  couple->add_option("--seed", seed, "Master seed");
  couple->add_option("--csv", csv, "Write per-bin rows here");

  CLI11_PARSE(app, argc, argv);

  try {
    std::optional<stochdom::Grid> g;
    if (!grid.empty()) g = parse_grid(grid);

    if (*check) {
      stochdom::CheckConfig cfg;
      cfg.alpha = to_vector(parse_list(alpha, "--alpha"));
      cfg.v = to_vector(parse_list(v, "--v"));
      if (!counts.empty()) cfg.counts = parse_counts(counts);
      cfg.grid = g;
      cfg.seed = seed;
      cfg.samples = samples;
      return emit(stochdom::cmd_check(cfg), csv);
    }
    if (*sweep) {
      stochdom::SweepConfig cfg;
      cfg.s_values.clear();
      for (double s : parse_list(s_values, "--s-values")) cfg.s_values.push_back(static_cast<int>(s));
      cfg.n_configs = n_configs;
      cfg.sum_alpha_min = sum_alpha_min;
      cfg.mc_samples = samples;
      cfg.master_seed = sweep_seed;
      cfg.grid = g;
      if (!alpha.empty()) cfg.alpha = to_vector(parse_list(alpha, "--alpha"));
      if (!v.empty()) cfg.v = to_vector(parse_list(v, "--v"));
      return emit(stochdom::cmd_sweep(cfg), csv);
    }
    if (*cert) return emit(stochdom::cmd_cert(a, b), csv);
    if (*example1) return emit(stochdom::cmd_example1(g), csv);
    if (*couple) {
      stochdom::CoupleConfig cfg;
      cfg.alpha = to_vector(parse_list(alpha, "--alpha"));
      cfg.v = to_vector(parse_list(v, "--v"));
      cfg.n = n;
      cfg.bins = bins;
      cfg.seed = seed;
      return emit(stochdom::cmd_couple(cfg), csv);
    }
  } catch (const std::exception& e) {
    std::cerr << "stochdom: " << e.what() << '\n';
    return kUsageError;
  }
  return kUsageError;
}
