#pragma once

#include <Eigen/Core>

#include <cstddef>
#include <utility>
#include <variant>
#include <vector>

#include "stochdom/rng.hpp"

namespace stochdom {

/// Dirichlet(alpha) belief over the known outcome values v.
///
/// Stored canonically with v ascending; alpha is permuted with it. The
/// permutation maps canonical slot i back to the caller's input position so
/// per-category data (counts) given in input order can be aligned.
class CategoricalBelief {
 public:
  CategoricalBelief(Eigen::VectorXd alpha, Eigen::VectorXd values);

  const Eigen::VectorXd& alpha() const { return alpha_; }
  const Eigen::VectorXd& values() const { return values_; }
  Eigen::Index size() const { return alpha_.size(); }

  double total() const { return alpha_.sum(); }
  double mean() const { return alpha_.dot(values_) / total(); }
  double lowest() const { return values_(0); }
  double highest() const { return values_(size() - 1); }
  bool degenerate() const { return lowest() == highest(); }

  /// input_position(i) is where canonical category i appeared in the input.
  Eigen::Index input_position(Eigen::Index i) const { return permutation_[i]; }

  /// Reorders a per-category vector given in input order into canonical order.
  template <typename Derived>
  auto to_canonical(const Eigen::MatrixBase<Derived>& input_order) const {
    typename Derived::PlainObject out(input_order.size());
    for (Eigen::Index i = 0; i < size(); ++i) out(i) = input_order(permutation_[i]);
    return out;
  }

 private:
  CategoricalBelief() = default;
  friend CategoricalBelief with_alpha(const CategoricalBelief&, Eigen::VectorXd);

  Eigen::VectorXd alpha_;
  Eigen::VectorXd values_;
  std::vector<Eigen::Index> permutation_;
};

/// Same values and permutation, new (already canonical-order) alpha.
CategoricalBelief with_alpha(const CategoricalBelief& belief, Eigen::VectorXd alpha);

/// Beta(a, b) mapped affinely onto [lo, hi].
struct Beta {
  Beta(double a, double b, double lo = 0.0, double hi = 1.0);
  double a, b, lo, hi;
};

struct Gaussian {
  Gaussian(double mu, double sigma2);
  double mu, sigma2;
  double sigma() const;
};

/// X = P^T v with P ~ Dirichlet(alpha).
struct DirichletWeighted {
  CategoricalBelief belief;
};

/// Uniform over a finite list of atoms (repeats weight an atom).
struct DiscreteUniform {
  explicit DiscreteUniform(std::vector<double> atoms);
  std::vector<double> atoms;  // ascending
};

/// Uniform atom plus independent Uniform[-halfwidth, halfwidth] noise.
struct AtomPlusUniform {
  AtomPlusUniform(std::vector<double> atoms, double halfwidth);
  std::vector<double> atoms;  // ascending
  double halfwidth;
};

/// Empirical law of a sample. Also carries prefix sums so the integrated CDF
/// E[(t - X)^+] is exact.
class Empirical {
 public:
  explicit Empirical(Eigen::VectorXd samples);

  const Eigen::VectorXd& samples() const { return samples_; }
  std::size_t size() const { return static_cast<std::size_t>(samples_.size()); }

  double cdf(double x) const;
  /// Binomial standard error sqrt(F(1-F)/n) of the empirical CDF at x.
  double standard_error(double x) const;
  /// E[(t - X)^+] under the empirical law.
  double integrated_cdf(double t) const;
  double mean() const { return mean_; }
  double variance() const;

 private:
  Eigen::VectorXd samples_;           // ascending
  std::vector<double> prefix_;        // prefix_[k] = sum of first k samples
  double mean_ = 0.0;
};

using Dist = std::variant<Beta, Gaussian, DirichletWeighted, DiscreteUniform,
                          AtomPlusUniform, Empirical>;

/// Density of an absolutely continuous alternative. Beta returns +inf at an
/// endpoint where its exponent is below one and 0 outside [lo, hi].
double pdf(const Dist& d, double x);
double cdf(const Dist& d, double x);
double mean(const Dist& d);
double variance(const Dist& d);
/// Closed support hull; Gaussian is (-inf, inf).
std::pair<double, double> support(const Dist& d);

/// n draws. Work is cut into fixed-size chunks, chunk c using rng.split(c), so
/// the output does not depend on how many threads ran.
Eigen::VectorXd sample(const Dist& d, Philox rng, std::size_t n);

/// Monte Carlo CDF of P^T v: sorted samples wrapped as an Empirical law.
Empirical mc_cdf(const CategoricalBelief& belief, Philox rng, std::size_t n);

bool is_atomic(const Dist& d);

}  // namespace stochdom
