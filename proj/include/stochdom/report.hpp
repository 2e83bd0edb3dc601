#pragma once

#include <Eigen/Core>
#include <json.hpp>

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "stochdom/dominance.hpp"
#include "stochdom/posterior.hpp"

namespace stochdom {

inline constexpr const char* kSchemaVersion = "1";
inline constexpr std::size_t kDefaultSamples = 200000;

enum ExitCode : int { exit_ok = 0, exit_violation = 1, exit_uncertified = 2 };

/// STOCHDOM_SAMPLES if set to a positive integer, else kDefaultSamples.
std::size_t default_samples();

struct Report {
  nlohmann::json doc;
  /// Flat CSV rows (header first) for --csv; empty when not applicable.
  std::string csv;
  int exit_code = exit_ok;
};

struct CheckConfig {
  Eigen::VectorXd alpha;
  Eigen::VectorXd v;
  /// Input order, aligned with alpha / v as given.
  std::optional<CountVector> counts;
  std::optional<Grid> grid;
  std::uint64_t seed = 0;
  std::size_t samples = kDefaultSamples;
};

struct SweepConfig {
  std::vector<int> s_values{2, 3, 5};
  int n_configs = 200;
  double sum_alpha_min = 2.0;
  std::size_t mc_samples = kDefaultSamples;
  std::uint64_t master_seed = 42;
  std::optional<Grid> grid;
  /// Forces every case to this belief instead of drawing one.
  std::optional<Eigen::VectorXd> alpha;
  std::optional<Eigen::VectorXd> v;

  void validate() const;
};

struct CoupleConfig {
  Eigen::VectorXd alpha;
  Eigen::VectorXd v;
  std::size_t n = 1000000;
  std::size_t bins = 20;
  std::uint64_t seed = 0;
};

/// The case pipeline shared by check and sweep. Case `index` under master
/// seed `seed` draws everything from Philox(seed, index): split(0) builds
/// random beliefs, split(1) feeds the Monte Carlo CDF of X.
Report cmd_check(const CheckConfig& config);
Report cmd_sweep(const SweepConfig& config);
Report cmd_cert(double a, double b);
Report cmd_example1(std::optional<Grid> grid = std::nullopt);
Report cmd_couple(const CoupleConfig& config);

/// Draws the belief for sweep case `index` (used by the sweep itself).
CategoricalBelief sweep_belief(const SweepConfig& config, int index);

/// Drops summary.wall_time_seconds; everything else is reproducible.
nlohmann::json without_wall_time(nlohmann::json doc);

}  // namespace stochdom
