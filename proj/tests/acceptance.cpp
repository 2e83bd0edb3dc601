// Acceptance run: one PASS/FAIL line per criterion, exit status 1 if any fail.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <sstream>
#include <string>
#include <vector>

#include "stochdom/coupling.hpp"
#include "stochdom/dominance.hpp"
#include "stochdom/posterior.hpp"
#include "stochdom/proof_cert.hpp"
#include "stochdom/report.hpp"

using namespace stochdom;

namespace {

struct Outcome {
  bool pass;
  std::string detail;
};

double log_uniform(Philox& rng, double lo, double hi) {
  return std::exp(std::log(lo) + std::log(hi / lo) * uniform01(rng));
}

SweepConfig sweep_config() {
  SweepConfig c;
  c.s_values = {2, 3, 5};
  c.n_configs = 200;
  c.master_seed = 42;
  c.mc_samples = 200000;
  return c;
}

// Keeps the first sweep around for the determinism criterion.
nlohmann::json first_sweep;

Outcome sweep_criterion() {
  const auto t0 = std::chrono::steady_clock::now();
  const Report r = cmd_sweep(sweep_config());
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  first_sweep = r.doc;
  const auto& s = r.doc["summary"];
  int within = 0;
  for (const auto& c : r.doc["cases"])
    within += c["ssd"]["margin"].get<double>() >= -c["ssd"]["tolerance"].get<double>();
  std::ostringstream d;
  d << within << "/200 ssd margins within tolerance, min margin/tolerance "
    << s["min_ssd_margin_over_tolerance"].get<double>() << ", " << secs << " s";
  return {within == 200 && secs <= 300.0, d.str()};
}

// (a, b) with a + b >= 2, cycling through the parameter families.
std::pair<double, double> cert_point(Philox& rng, int i) {
  double a = 1.0, b = 1.0;
  switch (i % 7) {
    case 0: {  // R1
      b = 0.02 + 0.98 * uniform01(rng);
      a = (2.0 - b) + log_uniform(rng, 1e-4, 60.0);
      break;
    }
    case 1: {  // R2
      do {
        a = 1.0 + log_uniform(rng, 1e-3, 60.0);
        b = 1.0 + log_uniform(rng, 1e-3, 60.0);
      } while ((a - 1.0) * (b - 1.0) < 1.0 / 9.0);
      break;
    }
    case 2: {  // R3
      a = 1.0 + log_uniform(rng, 1e-4, 60.0);
      b = 1.0 + (1.0 / (9.0 * (a - 1.0))) * uniform01(rng) * 0.999;
      break;
    }
    case 3: {  // b = 1 boundary of R1
      a = 1.0 + log_uniform(rng, 1e-4, 60.0);
      b = 1.0;
      break;
    }
    case 4: {  // uniform corner and its immediate neighbourhood
      a = (i % 2 == 0) ? 1.0 : 1.0 + 1e-3 * uniform01(rng);
      b = (i % 2 == 0) ? 1.0 : 2.0 - a + 1e-3 * uniform01(rng);
      break;
    }
    default: {  // anything, rescaled onto a + b >= 2
      a = log_uniform(rng, 0.01, 300.0);
      b = log_uniform(rng, 0.01, 300.0);
      if (a + b < 2.0) {
        const double s = 2.0 / (a + b);
        a *= s;
        b *= s;
      }
      break;
    }
  }
  if (i % 2 == 1) std::swap(a, b);  // mirrors
  return {a, b};
}

Outcome cert_criterion() {
  Philox rng(2002);
  int verdicts = 0, numeric_ok = 0, numeric_total = 0;
  int regions[5] = {0, 0, 0, 0, 0};
  int swapped = 0;
  std::string first_failure;
  for (int i = 0; i < 10000; ++i) {
    const auto [a, b] = cert_point(rng, i);
    const SingleCrossingCert c = cert_single_crossing(a, b);
    ++regions[static_cast<int>(c.region)];
    swapped += c.swapped;
    if (c.verdict)
      ++verdicts;
    else if (first_failure.empty())
      first_failure = " first failure (" + std::to_string(a) + ", " + std::to_string(b) + ")";
    if (i % 20 == 0) {
      ++numeric_total;
      const NumericCrossingCheck n = numeric_crossing_check(a, b);
      numeric_ok += n.pdf_sign_changes <= 2 && n.scd_holds;
    }
  }
  std::ostringstream d;
  d << verdicts << "/10000 verdicts (R1 " << regions[0] << ", R2 " << regions[1] << ", R3 "
    << regions[2] << ", uniform " << regions[3] << ", mirrored " << swapped << "), numeric "
    << numeric_ok << "/" << numeric_total << first_failure;
  return {verdicts == 10000 && numeric_ok == numeric_total && numeric_total == 500, d.str()};
}

Outcome constants_criterion() {
  const double g1 = g1_lower(1.0 / 3.0), g2 = g2_lower(1.0 / 3.0);
  const double r2 = r2_closed_form(1.0 / 3.0, 1.0 / 3.0);
  std::ostringstream d;
  d << "g1~(1/3) = " << g1 << ", g2~(1/3) = " << g2 << ", R2 closed form at A=B=1/3 = " << r2;
  return {g1 > 0.01 && g2 > 0.01 && std::fabs(r2) <= 1e-12, d.str()};
}

Outcome closed_form_criterion() {
  Philox rng(404);
  double worst_r2 = 0.0, worst_r1 = 0.0;
  for (int i = 0; i < 1000; ++i) {
    double a, b;
    do {
      a = 1.0 + log_uniform(rng, 1e-3, 50.0);
      b = 1.0 + log_uniform(rng, 1e-3, 50.0);
    } while ((a - 1.0) * (b - 1.0) < 1.0 / 9.0);
    const R2Witness w = cert_r2(a, b);
    worst_r2 = std::max(worst_r2, std::fabs(w.h_at_xK - w.h_direct));
  }
  for (int i = 0; i < 1000; ++i) {
    const double b = 0.01 + 0.98 * uniform01(rng);
    const double a = (2.0 - b) + log_uniform(rng, 1e-3, 50.0);
    const R1Witness w = cert_r1(a, b);
    worst_r1 = std::max(worst_r1, std::fabs(w.closed_form - w.scaled_g_at_xK) / std::fabs(w.closed_form));
  }
  std::ostringstream d;
  d << "R2 max abs diff " << worst_r2 << ", R1 max rel diff " << worst_r1;
  return {worst_r2 <= 1e-10 && worst_r1 <= 1e-9, d.str()};
}

Outcome gamma_criterion() {
  std::ostringstream d;
  bool ok = true;
  std::uint64_t stream = 0;
  for (auto [k1, k2] : {std::pair{1.0, 1.0}, {2.0, 3.0}, {0.3, 2.7}}) {
    const SlopeEstimate s = gamma_conditional_check(k1, k2, 1000000, Philox(5, stream++));
    const double rel = std::fabs(s.slope / s.expected - 1.0);
    ok = ok && rel <= 0.01;
    d << "(" << k1 << "," << k2 << ") slope " << s.slope << " rel err " << rel << "; ";
  }
  return {ok, d.str()};
}

Outcome coupling_criterion() {
  Eigen::VectorXd alpha(3), v(3);
  alpha << 1, 1, 1;
  v << 0, 0.5, 1;
  const CategoricalBelief b(alpha, v);
  const auto draws = coupled_sample(b, Philox(6), 1000000);
  double max_z = 0.0;
  for (const auto& bin : mps_check(draws, 20)) max_z = std::max(max_z, std::fabs(bin.z));
  const PairedDifference p = paired_mean_difference(draws);
  const double paired_z = std::fabs(p.mean / p.standard_error);
  double control_z = 0.0;
  for (const auto& bin : mps_check(shuffle_pairing(draws, Philox(7)), 20))
    control_z = std::max(control_z, std::fabs(bin.z));
  std::ostringstream d;
  d << "max bin |z| " << max_z << ", paired |z| " << paired_z << ", shuffled max |z| " << control_z;
  return {max_z <= 4.0 && paired_z <= 3.0 && control_z > 5.0, d.str()};
}

Outcome example1_criterion() {
  const Dist x = DiscreteUniform({-1.0, 1.0});
  const Dist y = AtomPlusUniform({-1.0, 1.0}, 1.0);
  const Grid g(-3.0, 3.0, kDefaultGridPoints);
  const DominanceVerdict scd = scd_check(x, y, g);
  const DominanceVerdict ssd = ssd_check(x, y, g);
  bool located = scd.crossings.size() == 3;
  if (located) {
    const double expect[3] = {-1.0, 0.0, 1.0};
    for (int i = 0; i < 3; ++i) located = located && std::fabs(scd.crossings[i] - expect[i]) <= 1e-6;
  }
  std::ostringstream d;
  d << scd.crossings.size() << " crossings";
  for (double c : scd.crossings) d << " " << c;
  d << ", ssd holds " << ssd.holds << " margin " << ssd.margin;
  return {located && ssd.holds && ssd.margin >= -1e-8, d.str()};
}

// Random pair of analytic laws for the scd => ssd property.
std::pair<Dist, Dist> analytic_pair(Philox& rng, int i) {
  const double a = log_uniform(rng, 0.3, 30.0), b = log_uniform(rng, 0.3, 30.0);
  const double m = a / (a + b);
  const double shift = 0.1 * (uniform01(rng) - 0.3);
  switch (i % 4) {
    case 0:
      return {Beta(a, b), Gaussian(m - shift, log_uniform(rng, 0.2, 3.0) / (a + b))};
    case 1:
      return {Gaussian(m, log_uniform(rng, 0.01, 1.0)),
              Gaussian(m - shift, log_uniform(rng, 0.01, 1.0))};
    case 2: {
      const double c = log_uniform(rng, 0.3, 30.0), e = log_uniform(rng, 0.3, 30.0);
      return {Beta(a, b), Beta(c, e)};
    }
    default:
      return {Beta(a, b, -1.0, 1.0), AtomPlusUniform({2.0 * m - 1.0 - shift}, log_uniform(rng, 0.05, 1.0))};
  }
}

Outcome scd_implies_ssd_criterion() {
  Philox rng(808);
  int scd_passes = 0, counterexamples = 0;
  for (int i = 0; i < 500; ++i) {
    const auto [x, y] = analytic_pair(rng, i);
    if (!scd_check(x, y).holds) continue;
    ++scd_passes;
    counterexamples += !ssd_check(x, y).holds;
  }
  std::ostringstream d;
  d << scd_passes << " scd passes of 500, " << counterexamples << " without ssd";
  return {counterexamples == 0 && scd_passes > 0, d.str()};
}

Outcome commuting_criterion() {
  Philox rng(909);
  double worst_mu = 0.0, worst_var = 0.0;
  for (int i = 0; i < 1000; ++i) {
    const int s = 2 + static_cast<int>(uniform01(rng) * 6);
    Eigen::VectorXd alpha(s), v(s);
    CountVector c(s);
    for (int k = 0; k < s; ++k) {
      alpha(k) = log_uniform(rng, 0.05, 20.0);
      v(k) = uniform01(rng);
      c(k) = static_cast<std::int64_t>(uniform01(rng) * 40.0);
    }
    const CategoricalBelief b(alpha, v);
    const GaussianPosterior lhs = matched_gaussian(dirichlet_update(b, c));
    const Eigen::VectorXd obs = observation_values(b, c);
    const GaussianPosterior rhs = gaussian_misspecified_update(
        matched_gaussian(b), std::span<const double>(obs.data(), static_cast<std::size_t>(obs.size())));
    worst_mu = std::max(worst_mu, std::fabs(lhs.mu - rhs.mu) / std::fabs(lhs.mu));
    worst_var = std::max(worst_var, std::fabs(lhs.sigma2 - rhs.sigma2) / lhs.sigma2);
  }
  std::ostringstream d;
  d << "max rel diff mu " << worst_mu << ", sigma2 " << worst_var;
  return {worst_mu <= 1e-12 && worst_var <= 1e-12, d.str()};
}

Outcome determinism_criterion() {
  const Report again = cmd_sweep(sweep_config());
  const bool same = without_wall_time(first_sweep).dump() == without_wall_time(again.doc).dump();
  return {same, same ? "second sweep byte-identical" : "sweep reports differ"};
}

}  // namespace

int main() {
  const std::vector<std::pair<const char*, std::function<Outcome()>>> criteria = {
      {"ssd of posterior over matched gaussian, 200 random beliefs", sweep_criterion},
      {"single-crossing certificate soundness", cert_criterion},
      {"bound constants", constants_criterion},
      {"closed-form cross-checks", closed_form_criterion},
      {"gamma conditional slope", gamma_criterion},
      {"beta coupling is a mean-preserving spread", coupling_criterion},
      {"ssd without single crossing example", example1_criterion},
      {"scd implies ssd", scd_implies_ssd_criterion},
      {"update/projection commute", commuting_criterion},
      {"sweep determinism", determinism_criterion},
  };
  int failures = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    Outcome o{false, ""};
    try {
      o = criteria[i].second();
    } catch (const std::exception& e) {
      o = {false, std::string("threw: ") + e.what()};
    }
    failures += !o.pass;
    std::printf("criterion %2zu %s  %s: %s\n", i + 1, o.pass ? "PASS" : "FAIL", criteria[i].first,
                o.detail.c_str());
    std::fflush(stdout);
  }
  return failures == 0 ? 0 : 1;
}
