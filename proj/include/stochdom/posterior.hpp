#pragma once

#include <Eigen/Core>

#include <cstdint>
#include <span>

#include "stochdom/distributions.hpp"

namespace stochdom {

/// Per-category observation counts c_s, aligned with a belief's canonical order.
using CountVector = Eigen::Matrix<std::int64_t, Eigen::Dynamic, 1>;

struct GaussianPosterior {
  GaussianPosterior(double mu, double sigma2);
  double mu, sigma2;
  Gaussian to_dist() const { return Gaussian(mu, sigma2); }
};

/// Beta(a, b) law of p~, placed on [lo, hi] = [v_1, v_S] by X~ = lo + (hi - lo) p~.
struct BetaProjection {
  double a, b, lo, hi;
  Beta unit() const { return Beta(a, b); }
  Beta scaled() const { return Beta(a, b, lo, hi); }
};

/// Dirichlet(alpha) -> Dirichlet(alpha + c).
CategoricalBelief dirichlet_update(const CategoricalBelief& belief, const CountVector& counts);

/// N(sum a v / sum a, 1 / sum a).
GaussianPosterior matched_gaussian(const CategoricalBelief& belief);

/// Conjugate update treating each observation as N(mean, 1): precision grows by
/// one per observation, mean is the precision-weighted average.
GaussianPosterior gaussian_misspecified_update(const GaussianPosterior& prior,
                                               std::span<const double> observations);

/// Mean-preserving Beta spread of P^T v. Throws DegenerateBelief if v_1 == v_S.
BetaProjection beta_projection(const CategoricalBelief& belief);

/// Bins raw observations into canonical-order counts by exact equality with v.
/// With duplicated values the first matching category receives the count.
/// Throws std::invalid_argument for a value absent from v.
CountVector bin_observations(const CategoricalBelief& belief, std::span<const double> z);

/// The raw observation multiset implied by counts: value v_s repeated c_s times.
Eigen::VectorXd observation_values(const CategoricalBelief& belief, const CountVector& counts);

}  // namespace stochdom
