#include "stochdom/coupling.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

#include "parallel.hpp"
#include "stochdom/errors.hpp"

namespace stochdom {

SlopeEstimate gamma_conditional_check(double k1, double k2, std::size_t n, Philox rng) {
  if (!(k1 > 0.0) || !(k2 > 0.0))
    throw std::invalid_argument("gamma_conditional_check: shapes must be > 0");
  if (n < 10000) throw std::invalid_argument("gamma_conditional_check: need n >= 1e4");

  Eigen::VectorXd g1(static_cast<Eigen::Index>(n)), sum(static_cast<Eigen::Index>(n));
  const std::size_t chunks = (n + detail::kSampleChunk - 1) / detail::kSampleChunk;
  detail::parallel_for(chunks, [&](std::size_t c) {
    Philox local = rng.split(c);
    const std::size_t end = std::min(n, (c + 1) * detail::kSampleChunk);
    for (std::size_t i = c * detail::kSampleChunk; i < end; ++i) {
      const double a = gamma_variate(local, k1);
      const double b = gamma_variate(local, k2);
      g1(static_cast<Eigen::Index>(i)) = a;
      sum(static_cast<Eigen::Index>(i)) = a + b;
    }
  });

  const double sxx = sum.squaredNorm();
  const double slope = g1.dot(sum) / sxx;
  const Eigen::ArrayXd resid = g1.array() - slope * sum.array();
  const double meat = (resid * sum.array()).square().sum();
  return {slope, std::sqrt(meat) / sxx, k1 / (k1 + k2)};
}

std::pair<Eigen::VectorXd, Eigen::VectorXd> split_shapes(const CategoricalBelief& belief) {
  if (belief.degenerate())
    throw DegenerateBelief("split_shapes: v_1 == v_S, no spread to couple");
  const double lo = belief.lowest(), hi = belief.highest(), w = hi - lo;
  const Eigen::ArrayXd alpha = belief.alpha().array();
  const Eigen::ArrayXd v = belief.values().array();
  Eigen::VectorXd low = (alpha * (hi - v) / w).matrix();
  Eigen::VectorXd high = (alpha * (v - lo) / w).matrix();
  return {low, high};
}

std::vector<CoupledDraw> coupled_sample(const CategoricalBelief& belief, Philox rng,
                                        std::size_t n) {
  const auto [low, high] = split_shapes(belief);
  const Eigen::Index s = belief.size();
  const double lo = belief.lowest(), w = belief.highest() - belief.lowest();
  const Eigen::VectorXd& v = belief.values();

  std::vector<CoupledDraw> out(n);
  const std::size_t chunks = (n + detail::kSampleChunk - 1) / detail::kSampleChunk;
  detail::parallel_for(chunks, [&](std::size_t c) {
    Philox local = rng.split(c);
    Eigen::ArrayXd log0(s), log1(s);
    const std::size_t end = std::min(n, (c + 1) * detail::kSampleChunk);
    for (std::size_t k = c * detail::kSampleChunk; k < end; ++k) {
      CoupledDraw& d = out[k];
      for (Eigen::Index i = 0; i < s; ++i) {
        log0(i) = log_gamma_variate(local, low(i));
        log1(i) = log_gamma_variate(local, high(i));
      }
      d.gamma0 = log0.exp().matrix();
      d.gamma1 = log1.exp().matrix();
      d.gamma = d.gamma0 + d.gamma1;
      // Ratios from max-shifted weights: small shapes underflow the raw variates.
      const double top = std::max(log0.maxCoeff(), log1.maxCoeff());
      const Eigen::ArrayXd w0 = (log0 - top).exp(), w1 = (log1 - top).exp();
      const double total = w0.sum() + w1.sum();
      d.x = std::clamp(((w0 + w1).matrix().dot(v)) / total, belief.lowest(), belief.highest());
      d.x_tilde = std::clamp(lo + w * (w1.sum() / total), belief.lowest(), belief.highest());
    }
  });
  return out;
}

std::vector<BinDeviation> mps_check(const std::vector<CoupledDraw>& draws, std::size_t bins) {
  if (bins < 10 || bins > 100) throw std::invalid_argument("mps_check: bins must be in [10, 100]");
  if (draws.size() / bins < 100)
    throw std::invalid_argument("mps_check: fewer than 100 draws per bin");

  std::vector<std::size_t> order(draws.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t l, std::size_t r) { return draws[l].x < draws[r].x; });

  std::vector<BinDeviation> out;
  out.reserve(bins);
  for (std::size_t b = 0; b < bins; ++b) {
    const std::size_t begin = b * draws.size() / bins;
    const std::size_t end = (b + 1) * draws.size() / bins;
    const double m = static_cast<double>(end - begin);
    double sum = 0.0;
    for (std::size_t k = begin; k < end; ++k) sum += draws[order[k]].x_tilde - draws[order[k]].x;
    const double dev = sum / m;
    double ss = 0.0;
    for (std::size_t k = begin; k < end; ++k) {
      const double r = draws[order[k]].x_tilde - draws[order[k]].x - dev;
      ss += r * r;
    }
    const double se = std::sqrt(ss / (m - 1.0) / m);
    const double z = se > 0.0 ? dev / se : (dev == 0.0 ? 0.0 : std::copysign(INFINITY, dev));
    out.push_back({draws[order[begin]].x, draws[order[end - 1]].x, end - begin, dev, se, z});
  }
  return out;
}

std::vector<CoupledDraw> shuffle_pairing(std::vector<CoupledDraw> draws, Philox rng) {
  // Fisher-Yates on x_tilde only; uniform01 keeps the permutation portable.
  for (std::size_t i = draws.size(); i > 1; --i) {
    const auto j = static_cast<std::size_t>(uniform01(rng) * static_cast<double>(i));
    std::swap(draws[i - 1].x_tilde, draws[std::min(j, i - 1)].x_tilde);
  }
  return draws;
}

PairedDifference paired_mean_difference(const std::vector<CoupledDraw>& draws) {
  if (draws.size() < 2) throw std::invalid_argument("paired_mean_difference: need >= 2 draws");
  const double n = static_cast<double>(draws.size());
  double sum = 0.0;
  for (const auto& d : draws) sum += d.x_tilde - d.x;
  const double mean = sum / n;
  double ss = 0.0;
  for (const auto& d : draws) ss += (d.x_tilde - d.x - mean) * (d.x_tilde - d.x - mean);
  return {mean, std::sqrt(ss / (n - 1.0) / n)};
}

DominanceVerdict empirical_ssd(const Eigen::VectorXd& samples_x, const Eigen::VectorXd& samples_y,
                               Grid grid) {
  if (samples_x.size() < 10000 || samples_y.size() < 10000)
    throw std::invalid_argument("empirical_ssd: need >= 1e4 samples on each side");
  return ssd_check(Empirical(samples_x), Empirical(samples_y), grid);
}

DominanceVerdict empirical_ssd(const Eigen::VectorXd& samples_x, const Eigen::VectorXd& samples_y) {
  const Empirical ex(samples_x), ey(samples_y);
  if (samples_x.size() < 10000 || samples_y.size() < 10000)
    throw std::invalid_argument("empirical_ssd: need >= 1e4 samples on each side");
  return ssd_check(ex, ey, default_grid(ex, ey));
}

}  // namespace stochdom
