#include "stochdom/distributions.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>
#include <string>

#include "parallel.hpp"
#include "stochdom/errors.hpp"
#include "stochdom/special.hpp"

namespace stochdom {

namespace {

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

constexpr double kInf = std::numeric_limits<double>::infinity();

void require(bool ok, const char* what) {
  if (!ok) throw std::invalid_argument(what);
}

std::vector<double> sorted_atoms(std::vector<double> atoms) {
  require(!atoms.empty(), "atom list must be non-empty");
  for (double a : atoms) require(std::isfinite(a), "atoms must be finite");
  std::sort(atoms.begin(), atoms.end());
  return atoms;
}

// Draw of P^T v via normalised Gamma variates, in log space so that tiny
// alpha (whose variates underflow) still normalise correctly.
double draw_dirichlet_weighted(const CategoricalBelief& belief, Philox& rng,
                               Eigen::VectorXd& log_gamma_scratch) {
  const Eigen::Index s = belief.size();
  for (Eigen::Index i = 0; i < s; ++i)
    log_gamma_scratch(i) = log_gamma_variate(rng, belief.alpha()(i));
  const double top = log_gamma_scratch.maxCoeff();
  double num = 0.0, den = 0.0;
  for (Eigen::Index i = 0; i < s; ++i) {
    const double w = std::exp(log_gamma_scratch(i) - top);
    num += w * belief.values()(i);
    den += w;
  }
  return std::clamp(num / den, belief.lowest(), belief.highest());
}

}  // namespace

CategoricalBelief::CategoricalBelief(Eigen::VectorXd alpha, Eigen::VectorXd values) {
  require(alpha.size() >= 1, "belief needs at least one category");
  require(alpha.size() == values.size(), "alpha and v must have equal length");
  for (Eigen::Index i = 0; i < alpha.size(); ++i) {
    require(std::isfinite(alpha(i)) && alpha(i) > 0.0, "alpha entries must be > 0");
    require(values(i) >= 0.0 && values(i) <= 1.0, "v entries must lie in [0, 1]");
  }
  permutation_.resize(static_cast<std::size_t>(alpha.size()));
  std::iota(permutation_.begin(), permutation_.end(), Eigen::Index{0});
  std::stable_sort(permutation_.begin(), permutation_.end(),
                   [&](Eigen::Index l, Eigen::Index r) { return values(l) < values(r); });
  alpha_.resize(alpha.size());
  values_.resize(values.size());
  for (Eigen::Index i = 0; i < alpha.size(); ++i) {
    alpha_(i) = alpha(permutation_[i]);
    values_(i) = values(permutation_[i]);
  }
}

CategoricalBelief with_alpha(const CategoricalBelief& belief, Eigen::VectorXd alpha) {
  require(alpha.size() == belief.size(), "alpha length must match belief");
  for (Eigen::Index i = 0; i < alpha.size(); ++i)
    require(std::isfinite(alpha(i)) && alpha(i) > 0.0, "alpha entries must be > 0");
  CategoricalBelief out;
  out.alpha_ = std::move(alpha);
  out.values_ = belief.values_;
  out.permutation_ = belief.permutation_;
  return out;
}

Beta::Beta(double a_, double b_, double lo_, double hi_) : a(a_), b(b_), lo(lo_), hi(hi_) {
  require(std::isfinite(a) && a > 0.0, "Beta: a must be > 0");
  require(std::isfinite(b) && b > 0.0, "Beta: b must be > 0");
  require(std::isfinite(lo) && std::isfinite(hi) && lo < hi, "Beta: need lo < hi");
}

Gaussian::Gaussian(double mu_, double sigma2_) : mu(mu_), sigma2(sigma2_) {
  require(std::isfinite(mu), "Gaussian: mu must be finite");
  require(std::isfinite(sigma2) && sigma2 > 0.0, "Gaussian: sigma2 must be > 0");
}

double Gaussian::sigma() const { return std::sqrt(sigma2); }

DiscreteUniform::DiscreteUniform(std::vector<double> atoms_)
    : atoms(sorted_atoms(std::move(atoms_))) {}

AtomPlusUniform::AtomPlusUniform(std::vector<double> atoms_, double halfwidth_)
    : atoms(sorted_atoms(std::move(atoms_))), halfwidth(halfwidth_) {
  require(std::isfinite(halfwidth) && halfwidth > 0.0, "AtomPlusUniform: halfwidth must be > 0");
}

Empirical::Empirical(Eigen::VectorXd samples) : samples_(std::move(samples)) {
  require(samples_.size() >= 1, "Empirical: need at least one sample");
  for (Eigen::Index i = 0; i < samples_.size(); ++i)
    require(std::isfinite(samples_(i)), "Empirical: samples must be finite");
  std::sort(samples_.begin(), samples_.end());
  prefix_.resize(size() + 1);
  prefix_[0] = 0.0;
  for (std::size_t k = 0; k < size(); ++k) prefix_[k + 1] = prefix_[k] + samples_(static_cast<Eigen::Index>(k));
  mean_ = prefix_.back() / static_cast<double>(size());
}

double Empirical::cdf(double x) const {
  const auto k = std::upper_bound(samples_.begin(), samples_.end(), x) - samples_.begin();
  return static_cast<double>(k) / static_cast<double>(size());
}

double Empirical::standard_error(double x) const {
  const double f = cdf(x);
  return std::sqrt(f * (1.0 - f) / static_cast<double>(size()));
}

double Empirical::integrated_cdf(double t) const {
  const auto k = std::upper_bound(samples_.begin(), samples_.end(), t) - samples_.begin();
  const double v = (static_cast<double>(k) * t - prefix_[static_cast<std::size_t>(k)]) /
                   static_cast<double>(size());
  return std::max(v, 0.0);
}

double Empirical::variance() const {
  if (size() < 2) return 0.0;
  return (samples_.array() - mean_).square().sum() / static_cast<double>(size() - 1);
}

double pdf(const Dist& d, double x) {
  return std::visit(
      overloaded{
          [x](const Beta& b) -> double {
            const double w = b.hi - b.lo;
            const double u = (x - b.lo) / w;
            if (u < 0.0 || u > 1.0) return 0.0;
            if (u == 0.0) {
              if (b.a < 1.0) return kInf;
              if (b.a > 1.0) return 0.0;
              return std::exp(-log_beta(b.a, b.b)) / w;
            }
            if (u == 1.0) {
              if (b.b < 1.0) return kInf;
              if (b.b > 1.0) return 0.0;
              return std::exp(-log_beta(b.a, b.b)) / w;
            }
            return std::exp((b.a - 1.0) * std::log(u) + (b.b - 1.0) * std::log1p(-u) -
                            log_beta(b.a, b.b)) /
                   w;
          },
          [x](const Gaussian& g) {
            return standard_normal_pdf((x - g.mu) / g.sigma()) / g.sigma();
          },
          [x](const AtomPlusUniform& m) {
            double acc = 0.0;
            for (double a : m.atoms)
              if (std::fabs(x - a) <= m.halfwidth) acc += 1.0;
            return acc / (2.0 * m.halfwidth * static_cast<double>(m.atoms.size()));
          },
          [](const auto&) -> double {
            throw UnsupportedVariant("pdf: distribution has no density");
          }},
      d);
}

double cdf(const Dist& d, double x) {
  return std::visit(
      overloaded{
          [x](const Beta& b) { return incomplete_beta(b.a, b.b, (x - b.lo) / (b.hi - b.lo)); },
          [x](const Gaussian& g) { return standard_normal_cdf((x - g.mu) / g.sigma()); },
          [](const DirichletWeighted&) -> double {
            throw UnsupportedVariant("cdf: DirichletWeighted has no closed form; use mc_cdf");
          },
          [x](const DiscreteUniform& u) {
            const auto k = std::upper_bound(u.atoms.begin(), u.atoms.end(), x) - u.atoms.begin();
            return static_cast<double>(k) / static_cast<double>(u.atoms.size());
          },
          [x](const AtomPlusUniform& m) {
            double acc = 0.0;
            for (double a : m.atoms)
              acc += std::clamp((x - a + m.halfwidth) / (2.0 * m.halfwidth), 0.0, 1.0);
            return acc / static_cast<double>(m.atoms.size());
          },
          [x](const Empirical& e) { return e.cdf(x); }},
      d);
}

double mean(const Dist& d) {
  return std::visit(
      overloaded{[](const Beta& b) { return b.lo + (b.hi - b.lo) * b.a / (b.a + b.b); },
                 [](const Gaussian& g) { return g.mu; },
                 [](const DirichletWeighted& w) { return w.belief.mean(); },
                 [](const DiscreteUniform& u) {
                   return std::accumulate(u.atoms.begin(), u.atoms.end(), 0.0) /
                          static_cast<double>(u.atoms.size());
                 },
                 [](const AtomPlusUniform& m) {
                   return std::accumulate(m.atoms.begin(), m.atoms.end(), 0.0) /
                          static_cast<double>(m.atoms.size());
                 },
                 [](const Empirical& e) { return e.mean(); }},
      d);
}

double variance(const Dist& d) {
  auto atom_variance = [](const std::vector<double>& atoms) {
    const double m = std::accumulate(atoms.begin(), atoms.end(), 0.0) / static_cast<double>(atoms.size());
    double acc = 0.0;
    for (double a : atoms) acc += (a - m) * (a - m);
    return acc / static_cast<double>(atoms.size());
  };
  return std::visit(
      overloaded{[](const Beta& b) {
                   const double s = b.a + b.b;
                   const double w = b.hi - b.lo;
                   return w * w * b.a * b.b / (s * s * (s + 1.0));
                 },
                 [](const Gaussian& g) { return g.sigma2; },
                 [](const DirichletWeighted& dw) {
                   // Var(P^T v) = (sum a v^2 / a0 - mean^2) / (a0 + 1)
                   const auto& b = dw.belief;
                   const double a0 = b.total();
                   const double m = b.mean();
                   const double second = b.alpha().dot(b.values().cwiseAbs2()) / a0;
                   return (second - m * m) / (a0 + 1.0);
                 },
                 [&](const DiscreteUniform& u) { return atom_variance(u.atoms); },
                 [&](const AtomPlusUniform& m) {
                   return atom_variance(m.atoms) + m.halfwidth * m.halfwidth / 3.0;
                 },
                 [](const Empirical& e) { return e.variance(); }},
      d);
}

std::pair<double, double> support(const Dist& d) {
  return std::visit(
      overloaded{[](const Beta& b) { return std::pair{b.lo, b.hi}; },
                 [](const Gaussian&) { return std::pair{-kInf, kInf}; },
                 [](const DirichletWeighted& w) {
                   return std::pair{w.belief.lowest(), w.belief.highest()};
                 },
                 [](const DiscreteUniform& u) { return std::pair{u.atoms.front(), u.atoms.back()}; },
                 [](const AtomPlusUniform& m) {
                   return std::pair{m.atoms.front() - m.halfwidth, m.atoms.back() + m.halfwidth};
                 },
                 [](const Empirical& e) {
                   return std::pair{e.samples()(0), e.samples()(e.samples().size() - 1)};
                 }},
      d);
}

bool is_atomic(const Dist& d) {
  return std::holds_alternative<DiscreteUniform>(d) || std::holds_alternative<Empirical>(d);
}

Eigen::VectorXd sample(const Dist& d, Philox rng, std::size_t n) {
  require(n >= 1, "sample: n must be >= 1");
  Eigen::VectorXd out(static_cast<Eigen::Index>(n));
  const std::size_t chunks = (n + detail::kSampleChunk - 1) / detail::kSampleChunk;

  detail::parallel_for(chunks, [&](std::size_t c) {
    Philox local = rng.split(c);
    const std::size_t begin = c * detail::kSampleChunk;
    const std::size_t end = std::min(n, begin + detail::kSampleChunk);
    std::visit(
        overloaded{
            [&](const Beta& b) {
              for (std::size_t i = begin; i < end; ++i) {
                const double la = log_gamma_variate(local, b.a);
                const double lb = log_gamma_variate(local, b.b);
                // p = 1 / (1 + exp(lb - la)), stable for extreme shapes
                const double p = 1.0 / (1.0 + std::exp(lb - la));
                out(static_cast<Eigen::Index>(i)) = b.lo + (b.hi - b.lo) * p;
              }
            },
            [&](const Gaussian& g) {
              const double s = g.sigma();
              for (std::size_t i = begin; i < end; ++i)
                out(static_cast<Eigen::Index>(i)) = g.mu + s * standard_normal(local);
            },
            [&](const DirichletWeighted& w) {
              Eigen::VectorXd scratch(w.belief.size());
              for (std::size_t i = begin; i < end; ++i)
                out(static_cast<Eigen::Index>(i)) = draw_dirichlet_weighted(w.belief, local, scratch);
            },
            [&](const DiscreteUniform& u) {
              const auto m = u.atoms.size();
              for (std::size_t i = begin; i < end; ++i) {
                auto k = static_cast<std::size_t>(uniform01(local) * static_cast<double>(m));
                out(static_cast<Eigen::Index>(i)) = u.atoms[std::min(k, m - 1)];
              }
            },
            [&](const AtomPlusUniform& a) {
              const auto m = a.atoms.size();
              for (std::size_t i = begin; i < end; ++i) {
                auto k = static_cast<std::size_t>(uniform01(local) * static_cast<double>(m));
                const double noise = a.halfwidth * (2.0 * uniform01(local) - 1.0);
                out(static_cast<Eigen::Index>(i)) = a.atoms[std::min(k, m - 1)] + noise;
              }
            },
            [&](const Empirical& e) {
              const auto m = e.size();
              for (std::size_t i = begin; i < end; ++i) {
                auto k = static_cast<std::size_t>(uniform01(local) * static_cast<double>(m));
                out(static_cast<Eigen::Index>(i)) = e.samples()(static_cast<Eigen::Index>(std::min(k, m - 1)));
              }
            }},
        d);
  });
  return out;
}

Empirical mc_cdf(const CategoricalBelief& belief, Philox rng, std::size_t n) {
  require(n >= 1000, "mc_cdf: need at least 1000 samples");
  return Empirical(sample(DirichletWeighted{belief}, rng, n));
}

}  // namespace stochdom
