#include "stochdom/posterior.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

#include "stochdom/errors.hpp"

namespace stochdom {

GaussianPosterior::GaussianPosterior(double mu_, double sigma2_) : mu(mu_), sigma2(sigma2_) {
  if (!std::isfinite(mu) || !std::isfinite(sigma2) || !(sigma2 > 0.0))
    throw std::invalid_argument("GaussianPosterior: need finite mu and sigma2 > 0");
}

CategoricalBelief dirichlet_update(const CategoricalBelief& belief, const CountVector& counts) {
  if (counts.size() != belief.size())
    throw std::invalid_argument("dirichlet_update: counts length " +
                                std::to_string(counts.size()) + " != belief size " +
                                std::to_string(belief.size()));
  if ((counts.array() < 0).any())
    throw std::invalid_argument("dirichlet_update: counts must be nonnegative");
  return with_alpha(belief, belief.alpha() + counts.cast<double>());
}

GaussianPosterior matched_gaussian(const CategoricalBelief& belief) {
  const double total = belief.total();
  return {belief.alpha().dot(belief.values()) / total, 1.0 / total};
}

GaussianPosterior gaussian_misspecified_update(const GaussianPosterior& prior,
                                               std::span<const double> observations) {
  if (observations.empty()) return prior;
  const double prior_precision = 1.0 / prior.sigma2;
  double sum = 0.0;
  for (double z : observations) sum += z;
  const double precision = prior_precision + static_cast<double>(observations.size());
  return {(prior.mu * prior_precision + sum) / precision, 1.0 / precision};
}

BetaProjection beta_projection(const CategoricalBelief& belief) {
  if (belief.degenerate())
    throw DegenerateBelief("beta_projection: v_1 == v_S, X is a point mass");
  const double lo = belief.lowest();
  const double hi = belief.highest();
  const double width = hi - lo;
  const auto& alpha = belief.alpha();
  const auto& v = belief.values();
  const double a = alpha.dot((v.array() - lo).matrix()) / width;
  const double b = alpha.dot((hi - v.array()).matrix()) / width;
  return {a, b, lo, hi};
}

CountVector bin_observations(const CategoricalBelief& belief, std::span<const double> z) {
  CountVector counts = CountVector::Zero(belief.size());
  for (double value : z) {
    Eigen::Index hit = -1;
    for (Eigen::Index s = 0; s < belief.size(); ++s) {
      if (belief.values()(s) == value) {
        hit = s;
        break;
      }
    }
    if (hit < 0)
      throw std::invalid_argument("bin_observations: value " + std::to_string(value) +
                                  " is not one of the outcome values");
    ++counts(hit);
  }
  return counts;
}

Eigen::VectorXd observation_values(const CategoricalBelief& belief, const CountVector& counts) {
  if (counts.size() != belief.size())
    throw std::invalid_argument("observation_values: counts length mismatch");
  Eigen::VectorXd out(counts.sum());
  Eigen::Index k = 0;
  for (Eigen::Index s = 0; s < counts.size(); ++s)
    for (std::int64_t j = 0; j < counts(s); ++j) out(k++) = belief.values()(s);
  return out;
}

}  // namespace stochdom
