#include "stochdom/dominance.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>
#include <stdexcept>

#include "stochdom/errors.hpp"
#include "stochdom/special.hpp"

namespace stochdom {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// Interval a law must be covered by for its CDF to be ~0 below and ~1 above.
std::pair<double, double> required_span(const Dist& d) {
  if (const auto* g = std::get_if<Gaussian>(&d))
    return {g->mu - kGaussianTailSigmas * g->sigma(), g->mu + kGaussianTailSigmas * g->sigma()};
  return support(d);
}

Grid cover(Grid grid, const Dist& x, const Dist& y, std::vector<std::string>& warnings) {
  const auto [xl, xh] = required_span(x);
  const auto [yl, yh] = required_span(y);
  const double lo = std::min(xl, yl);
  const double hi = std::max(xh, yh);
  if (grid.lo <= lo && grid.hi >= hi) return grid;
  std::ostringstream msg;
  msg << "grid [" << grid.lo << ", " << grid.hi << "] extended to cover [" << lo << ", " << hi
      << "]";
  warnings.push_back(msg.str());
  return Grid(std::min(grid.lo, lo), std::max(grid.hi, hi), grid.points);
}

const Empirical* as_empirical(const Dist& d) { return std::get_if<Empirical>(&d); }

double standard_error_at(const Dist& d, double t) {
  const auto* e = as_empirical(d);
  return e ? e->standard_error(t) : 0.0;
}

Eigen::ArrayXd cdf_on(const Dist& d, const Grid& grid) {
  Eigen::ArrayXd out(grid.points);
  for (int i = 0; i < grid.points; ++i) out(i) = cdf(d, grid.node(i));
  return out;
}

double atom_plus_uniform_integrated(const AtomPlusUniform& m, double t) {
  double acc = 0.0;
  const double h = m.halfwidth;
  for (double a : m.atoms) {
    const double u = t - a;
    if (u <= -h) continue;
    acc += u >= h ? u : (u + h) * (u + h) / (4.0 * h);
  }
  return acc / static_cast<double>(m.atoms.size());
}

double discrete_integrated(const DiscreteUniform& d, double t) {
  double acc = 0.0;
  for (double a : d.atoms)
    if (a < t) acc += t - a;
  return acc / static_cast<double>(d.atoms.size());
}

struct RunningIntegral {
  Eigen::ArrayXd values;        // integral of F from -inf (or grid.lo) to each node
  double quadrature_error = 0;  // estimate, already conservative
  double truncation = 0;        // mass of the integral below grid.lo ignored
  Eigen::ArrayXd mc_spread;     // integrated standard error (empirical only)
};

// Cumulative composite Simpson over nodes with the given spacing; odd nodes use
// the half-panel rule h/12 (5 f0 + 8 f1 - f2).
Eigen::ArrayXd cumulative_simpson(const Eigen::ArrayXd& f, double h) {
  const Eigen::Index n = f.size();
  Eigen::ArrayXd c = Eigen::ArrayXd::Zero(n);
  for (Eigen::Index k = 0; k + 2 < n; k += 2) {
    c(k + 1) = c(k) + h / 12.0 * (5.0 * f(k) + 8.0 * f(k + 1) - f(k + 2));
    c(k + 2) = c(k) + h / 3.0 * (f(k) + 4.0 * f(k + 1) + f(k + 2));
  }
  return c;
}

RunningIntegral running_integral(const Dist& d, const Grid& grid) {
  RunningIntegral r;
  r.values.resize(grid.points);
  r.mc_spread = Eigen::ArrayXd::Zero(grid.points);

  if (const auto* e = as_empirical(d)) {
    for (int i = 0; i < grid.points; ++i) r.values(i) = e->integrated_cdf(grid.node(i));
    const double h = grid.step();
    double prev = e->standard_error(grid.node(0));
    for (int i = 1; i < grid.points; ++i) {
      const double cur = e->standard_error(grid.node(i));
      r.mc_spread(i) = r.mc_spread(i - 1) + 0.5 * h * (prev + cur);
      prev = cur;
    }
    return r;
  }
  if (const auto* du = std::get_if<DiscreteUniform>(&d)) {
    for (int i = 0; i < grid.points; ++i) r.values(i) = discrete_integrated(*du, grid.node(i));
    return r;
  }
  if (const auto* au = std::get_if<AtomPlusUniform>(&d)) {
    for (int i = 0; i < grid.points; ++i)
      r.values(i) = atom_plus_uniform_integrated(*au, grid.node(i));
    return r;
  }

  const Eigen::ArrayXd f = cdf_on(d, grid);
  const double h = grid.step();
  r.values = cumulative_simpson(f, h);

  // Richardson-style estimate: compare with step 2h on nodes 0, 4, 8, ...
  // |S_h - S_2h| bounds the S_h error whenever the convergence order is >= 1,
  // which covers the kinks and x^a endpoint behaviour of Beta CDFs.
  Eigen::ArrayXd coarse_f(grid.points / 2 + 1);
  Eigen::Index m = 0;
  for (Eigen::Index i = 0; i < grid.points; i += 2) coarse_f(m++) = f(i);
  coarse_f.conservativeResize(m);
  const Eigen::ArrayXd coarse = cumulative_simpson(coarse_f, 2.0 * h);
  double err = 0.0;
  for (Eigen::Index j = 0; 2 * j < grid.points && j < m; j += 2)
    err = std::max(err, std::fabs(r.values(2 * j) - coarse(j)));
  r.quadrature_error = err;

  if (const auto* g = std::get_if<Gaussian>(&d))
    r.truncation = g->sigma() * standard_normal_integrated_cdf((grid.lo - g->mu) / g->sigma());
  return r;
}

double mean_tolerance(const Dist& d) {
  if (const auto* e = as_empirical(d))
    return 3.0 * std::sqrt(e->variance() / static_cast<double>(e->size()));
  return 0.0;
}

void check_finite_mean(const Dist& d) {
  if (!std::isfinite(mean(d))) throw std::domain_error("dominance: input has infinite mean");
}

}  // namespace

Grid::Grid(double lo_, double hi_, int points_) : lo(lo_), hi(hi_), points(points_) {
  if (!(std::isfinite(lo) && std::isfinite(hi) && lo < hi))
    throw std::invalid_argument("Grid: need finite lo < hi");
  if (points < 33 || points % 2 == 0)
    throw std::invalid_argument("Grid: points must be odd and >= 33");
}

Eigen::ArrayXd Grid::nodes() const {
  Eigen::ArrayXd out(points);
  for (int i = 0; i < points; ++i) out(i) = node(i);
  return out;
}

Grid default_grid(const Dist& x, const Dist& y, int points) {
  const auto [xl, xh] = required_span(x);
  const auto [yl, yh] = required_span(y);
  double lo = std::min(xl, yl);
  double hi = std::max(xh, yh);
  if (lo == hi) {
    lo -= 0.5;
    hi += 0.5;
  }
  return Grid(lo, hi, points);
}

const char* to_string(Relation r) {
  switch (r) {
    case Relation::fsd: return "fsd";
    case Relation::ssd: return "ssd";
    case Relation::scd: return "scd";
    case Relation::none: return "none";
  }
  return "none";
}

DominanceVerdict fsd_check(const Dist& x, const Dist& y, Grid grid) {
  DominanceVerdict v;
  v.relation = Relation::fsd;
  v.grid = cover(grid, x, y, v.warnings);
  v.margin = kInf;
  v.holds = true;
  double worst_tol = kAnalyticTolerance;
  for (int i = 0; i < v.grid.points; ++i) {
    const double t = v.grid.node(i);
    const double gap = cdf(y, t) - cdf(x, t);
    const double tol =
        kAnalyticTolerance + 3.0 * (standard_error_at(x, t) + standard_error_at(y, t));
    worst_tol = std::max(worst_tol, tol);
    if (gap < v.margin) {
      v.margin = gap;
      v.worst_at = t;
    }
    if (gap < -tol) v.holds = false;
  }
  v.tolerance = worst_tol;
  return v;
}

DominanceVerdict fsd_check(const Dist& x, const Dist& y) {
  return fsd_check(x, y, default_grid(x, y));
}

DominanceVerdict ssd_check(const Dist& x, const Dist& y, Grid grid) {
  check_finite_mean(x);
  check_finite_mean(y);
  DominanceVerdict v;
  v.relation = Relation::ssd;
  v.grid = cover(grid, x, y, v.warnings);

  const RunningIntegral gx = running_integral(x, v.grid);
  const RunningIntegral gy = running_integral(y, v.grid);
  const Eigen::ArrayXd integral = gy.values - gx.values;
  const double fixed = kAnalyticTolerance + gx.quadrature_error + gy.quadrature_error +
                       gx.truncation + gy.truncation;
  const Eigen::ArrayXd tol = fixed + 3.0 * (gx.mc_spread + gy.mc_spread);

  Eigen::Index worst = 0;
  v.margin = integral.minCoeff(&worst);
  v.worst_at = v.grid.node(static_cast<int>(worst));
  v.holds = ((integral + tol) >= 0.0).all();
  v.tolerance = tol.maxCoeff();
  return v;
}

DominanceVerdict ssd_check(const Dist& x, const Dist& y) {
  return ssd_check(x, y, default_grid(x, y));
}

DominanceVerdict scd_check(const Dist& x, const Dist& y, Grid grid) {
  DominanceVerdict v;
  v.relation = Relation::scd;
  v.grid = cover(grid, x, y, v.warnings);

  const bool sampled = as_empirical(x) || as_empirical(y);
  auto diff = [&](double t) { return cdf(y, t) - cdf(x, t); };
  auto band = [&](double t) {
    if (!sampled) return kCrossingDeadBand;
    return 10.0 * kCrossingDeadBand + 3.0 * (standard_error_at(x, t) + standard_error_at(y, t));
  };
  auto sign_at = [&](double t) {
    const double d = diff(t);
    const double b = band(t);
    return d > b ? 1 : (d < -b ? -1 : 0);
  };

  int last_sign = 0;
  double last_t = v.grid.lo;
  int first_change_from = 0;
  for (int i = 0; i < v.grid.points; ++i) {
    const double t = v.grid.node(i);
    const int s = sign_at(t);
    if (s == 0) continue;
    if (last_sign != 0 && s != last_sign) {
      if (v.crossings.empty()) first_change_from = last_sign;
      // Both ends sit outside the band, so bisect on the raw sign; an exact
      // zero counts as having left last_sign.
      double left = last_t, right = t;
      for (int it = 0; it < 200 && right - left > kCrossingResolution; ++it) {
        const double mid = 0.5 * (left + right);
        const double d = diff(mid);
        if ((d > 0.0 ? 1 : (d < 0.0 ? -1 : 0)) == last_sign)
          left = mid;
        else
          right = mid;
      }
      v.crossings.push_back(0.5 * (left + right));
    }
    last_sign = s;
    last_t = t;
  }

  v.margin = mean(x) - mean(y);
  v.tolerance = kAnalyticTolerance + mean_tolerance(x) + mean_tolerance(y);
  const bool means_ordered = v.margin >= -v.tolerance;
  const bool single = v.crossings.empty() || (v.crossings.size() == 1 && first_change_from > 0);
  v.holds = means_ordered && single;
  if (!v.crossings.empty()) v.worst_at = v.crossings.front();
  return v;
}

DominanceVerdict scd_check(const Dist& x, const Dist& y) {
  return scd_check(x, y, default_grid(x, y));
}

std::vector<HingeMargin> hinge_utility_check(const Dist& x, const Dist& y,
                                             std::span<const double> anchors, Philox rng,
                                             std::size_t n) {
  auto draws = [&](const Dist& d, std::uint64_t stream) -> Eigen::VectorXd {
    if (const auto* e = as_empirical(d)) return e->samples();
    if (n < 10000) throw std::invalid_argument("hinge_utility_check: need n >= 1e4 draws");
    return sample(d, rng.split(stream), n);
  };
  const Eigen::VectorXd xs = draws(x, 0);
  const Eigen::VectorXd ys = draws(y, 1);

  auto moments = [](const Eigen::VectorXd& s, double a) {
    const Eigen::ArrayXd u = (s.array() - a).min(0.0);
    const double m = u.mean();
    const double var = s.size() > 1 ? (u - m).square().sum() / static_cast<double>(s.size() - 1) : 0.0;
    return std::pair{m, var / static_cast<double>(s.size())};
  };

  std::vector<HingeMargin> out;
  out.reserve(anchors.size());
  for (double a : anchors) {
    const auto [mx, vx] = moments(xs, a);
    const auto [my, vy] = moments(ys, a);
    out.push_back({a, mx - my, std::sqrt(vx + vy)});
  }
  return out;
}

}  // namespace stochdom
