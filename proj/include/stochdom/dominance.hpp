#pragma once

#include <Eigen/Core>

#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "stochdom/distributions.hpp"
#include "stochdom/rng.hpp"

namespace stochdom {

inline constexpr int kDefaultGridPoints = 4097;
/// Absolute margin tolerance for analytic-vs-analytic comparisons.
inline constexpr double kAnalyticTolerance = 1e-8;
/// Dead band on |F_Y - F_X| below which a node counts as a tie.
inline constexpr double kCrossingDeadBand = 1e-9;
/// Crossing abscissae are bisected to this width.
inline constexpr double kCrossingResolution = 1e-10;
/// Gaussian tails are covered out to this many standard deviations.
inline constexpr double kGaussianTailSigmas = 6.0;

/// Uniform nodes lo, lo + h, ..., hi. Odd and >= 33 so Simpson panels pair up.
struct Grid {
  Grid() : Grid(0.0, 1.0, 33) {}
  Grid(double lo, double hi, int points);

  double lo, hi;
  int points;

  double step() const { return (hi - lo) / (points - 1); }
  double node(int i) const { return i == points - 1 ? hi : lo + i * step(); }
  Eigen::ArrayXd nodes() const;
};

/// [min(support lows, mu - 6 sigma), max(support highs, mu + 6 sigma)].
Grid default_grid(const Dist& x, const Dist& y, int points = kDefaultGridPoints);

enum class Relation { fsd, ssd, scd, none };
const char* to_string(Relation r);

struct DominanceVerdict {
  Relation relation = Relation::none;
  bool holds = false;
  /// min over nodes of the defining functional: F_Y - F_X (fsd), the running
  /// integral I(t) of F_Y - F_X (ssd), E[X] - E[Y] (scd).
  double margin = 0.0;
  /// Abscissa where margin is attained (fsd, ssd).
  double worst_at = 0.0;
  /// Sign-change abscissae of F_Y - F_X, ascending.
  std::vector<double> crossings;
  double tolerance = 0.0;
  Grid grid;
  std::vector<std::string> warnings;
};

/// X >=_fsd Y on the grid: F_X <= F_Y + tol at every node.
DominanceVerdict fsd_check(const Dist& x, const Dist& y, Grid grid);
DominanceVerdict fsd_check(const Dist& x, const Dist& y);

/// X >=_ssd Y: the running integral of F_Y - F_X stays >= -tol at every node.
///
/// Smooth CDFs (Beta, Gaussian) are integrated by composite Simpson from
/// grid.lo, with a Richardson-style error estimate |S_h - S_2h| and the
/// analytic Gaussian tail below grid.lo added to the tolerance. Piecewise
/// polynomial CDFs (atoms, empirical, atom + uniform) are integrated exactly.
/// Empirical inputs widen the tolerance by 3x their standard error integrated
/// from grid.lo, node by node.
DominanceVerdict ssd_check(const Dist& x, const Dist& y, Grid grid);
DominanceVerdict ssd_check(const Dist& x, const Dist& y);

/// X >=_sc Y: means ordered and F_Y - F_X changes sign at most once, from
/// positive to negative, after dead-banding ties.
DominanceVerdict scd_check(const Dist& x, const Dist& y, Grid grid);
DominanceVerdict scd_check(const Dist& x, const Dist& y);

struct HingeMargin {
  double anchor;
  /// E[min(X - a, 0)] - E[min(Y - a, 0)]
  double margin;
  double standard_error;
};

/// Expectation-route SSD cross-check with u_a(x) = min(x - a, 0). Empirical
/// inputs use their own samples; other laws draw n samples (n >= 1e4) from
/// rng.split(0) for X and rng.split(1) for Y.
std::vector<HingeMargin> hinge_utility_check(const Dist& x, const Dist& y,
                                             std::span<const double> anchors, Philox rng,
                                             std::size_t n);

}  // namespace stochdom
