#pragma once

#include <Eigen/Core>

#include <cstddef>
#include <vector>

#include "stochdom/distributions.hpp"
#include "stochdom/dominance.hpp"
#include "stochdom/rng.hpp"

namespace stochdom {

struct SlopeEstimate {
  double slope;
  double standard_error;  // heteroscedasticity-robust (sandwich)
  double expected;        // k1 / (k1 + k2)
};

/// Through-origin regression of g1 on g1 + g2 for independent
/// g1 ~ Gamma(k1), g2 ~ Gamma(k2). Conditional linearity predicts slope
/// k1 / (k1 + k2). Requires n >= 1e4.
SlopeEstimate gamma_conditional_check(double k1, double k2, std::size_t n, Philox rng);

/// One joint draw of (X, X~) built from split Gamma variates.
///
/// Category i splits alpha_i into a low-side shape alpha_i (v_S - v_i) / w and
/// a high-side shape alpha_i (v_i - v_1) / w (w = v_S - v_1), drawn
/// independently as gamma0[i] and gamma1[i]; gamma = gamma0 + gamma1 then has
/// the Dirichlet's Gamma(alpha_i) marginals. X = sum gamma v / sum gamma and
/// X~ = v_1 + w p~ with p~ = sum gamma1 / sum gamma ~ Beta(a~, b~).
struct CoupledDraw {
  Eigen::VectorXd gamma;
  Eigen::VectorXd gamma0;
  Eigen::VectorXd gamma1;
  double x;
  double x_tilde;
};

/// Shapes (low side, high side) per canonical category.
std::pair<Eigen::VectorXd, Eigen::VectorXd> split_shapes(const CategoricalBelief& belief);

/// Throws DegenerateBelief if v_1 == v_S. Chunked by rng.split(chunk).
std::vector<CoupledDraw> coupled_sample(const CategoricalBelief& belief, Philox rng,
                                        std::size_t n);

struct BinDeviation {
  double x_lo, x_hi;      // range of x in the bin
  std::size_t count;
  double deviation;       // mean(x_tilde - x) within the bin
  double standard_error;  // paired
  double z;               // deviation / standard_error, 0 when both vanish
};

/// Equal-count bins by x; E[X~ | X] = X predicts every deviation ~ 0.
/// bins must lie in [10, 100] and each bin must hold >= 100 draws.
std::vector<BinDeviation> mps_check(const std::vector<CoupledDraw>& draws, std::size_t bins);

/// Negative control: same draws with x_tilde randomly re-paired.
std::vector<CoupledDraw> shuffle_pairing(std::vector<CoupledDraw> draws, Philox rng);

struct PairedDifference {
  double mean;            // mean(x_tilde - x)
  double standard_error;
};
PairedDifference paired_mean_difference(const std::vector<CoupledDraw>& draws);

/// ssd_check on two sample sets (each >= 1e4) with MC-aware tolerance.
DominanceVerdict empirical_ssd(const Eigen::VectorXd& samples_x, const Eigen::VectorXd& samples_y,
                               Grid grid);
DominanceVerdict empirical_ssd(const Eigen::VectorXd& samples_x, const Eigen::VectorXd& samples_y);

}  // namespace stochdom
