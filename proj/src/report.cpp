#include "stochdom/report.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <limits>
#include <sstream>
#include <stdexcept>

#include "parallel.hpp"
#include "stochdom/coupling.hpp"
#include "stochdom/errors.hpp"
#include "stochdom/proof_cert.hpp"

namespace stochdom {

using nlohmann::json;

namespace {

json array_of(const Eigen::VectorXd& v) {
  json out = json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) out.push_back(v(i));
  return out;
}

json array_of(const CountVector& v) {
  json out = json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) out.push_back(v(i));
  return out;
}

json grid_json(const Grid& g) { return {{"lo", g.lo}, {"hi", g.hi}, {"points", g.points}}; }

json verdict_json(const DominanceVerdict& v) {
  return {{"relation", to_string(v.relation)},
          {"holds", v.holds},
          {"margin", v.margin},
          {"worst_at", v.worst_at},
          {"tolerance", v.tolerance},
          {"crossings", v.crossings},
          {"grid", grid_json(v.grid)},
          {"warnings", v.warnings}};
}

json witness_json(const CertWitness& w) {
  struct Visitor {
    json operator()(std::monostate) const { return nullptr; }
    json operator()(const R1Witness& r) const {
      return {{"A", r.A},
              {"C", r.C},
              {"K", r.K},
              {"x_K", r.xK},
              {"g_at_xK", r.g_at_xK},
              {"scaled_g_at_xK", r.scaled_g_at_xK},
              {"closed_form", r.closed_form},
              {"cancelled_form", r.cancelled_form},
              {"g_max", r.g_max},
              {"x_gmax", r.x_gmax},
              {"monotone", r.monotone},
              {"x_low", r.x_low},
              {"x_high", r.x_high},
              {"gap_low", r.gap_low},
              {"gap_high", r.gap_high},
              {"gap_right", r.gap_right},
              {"passes", r.passes}};
    }
    json operator()(const R2Witness& r) const {
      return {{"A", r.A},          {"B", r.B},
              {"K", r.K},          {"x_K", r.xK},
              {"h_at_xK", r.h_at_xK}, {"h_direct", r.h_direct},
              {"consistent", r.consistent}, {"passes", r.passes}};
    }
    json operator()(const R3Witness& r) const {
      return {{"A", r.A},   {"B", r.B},   {"x1", r.x1},           {"x2", r.x2},
              {"f1", r.f1}, {"f2", r.f2}, {"h_at_x1", r.h_at_x1}, {"h_at_x2", r.h_at_x2},
              {"passes", r.passes}};
    }
    json operator()(const UniformWitness& r) const {
      return {{"gaussian_peak", r.gaussian_peak},
              {"uniform_density", r.uniform_density},
              {"passes", r.passes}};
    }
  };
  return std::visit(Visitor{}, w);
}

json cert_json(const SingleCrossingCert& c) {
  return {{"a", c.a},
          {"b", c.b},
          {"region", to_string(c.region)},
          {"swapped", c.swapped},
          {"verdict", c.verdict},
          {"witness", witness_json(c.witness)}};
}

std::string num(double x) {
  std::ostringstream os;
  os.precision(std::numeric_limits<double>::max_digits10);
  os << x;
  return os.str();
}

std::string join(const std::vector<std::string>& cells) {
  std::string out;
  for (std::size_t i = 0; i < cells.size(); ++i) {
    if (i) out += ',';
    out += cells[i];
  }
  return out + '\n';
}

const std::vector<std::string> kCaseCsvHeader = {
    "index",     "master_seed", "S",         "sum_alpha",    "mu",        "sigma2",
    "beta_a",    "beta_b",      "region",    "cert_verdict", "ssd_holds", "ssd_margin",
    "ssd_tolerance", "scd_beta_holds", "status"};

struct CaseOutcome {
  json record;
  std::vector<std::string> csv;
  bool claimed = false;
  bool violation = false;
  bool ssd_holds = false;
  bool cert_verdict = false;
  bool scd_holds = false;
  double ssd_margin = 0.0;
  double ssd_tolerance = 0.0;
};

CaseOutcome run_case(const CategoricalBelief& prior, const std::optional<CountVector>& counts,
                     const std::optional<Grid>& grid, std::uint64_t seed, int index,
                     std::size_t samples) {
  CaseOutcome out;
  json& r = out.record;
  r["index"] = index;
  r["seed"] = {{"master", seed}, {"stream", index}};
  r["belief"] = {{"alpha", array_of(prior.alpha())},
                 {"v", array_of(prior.values())},
                 {"sum_alpha", prior.total()}};

  const CategoricalBelief post = counts ? dirichlet_update(prior, *counts) : prior;
  const GaussianPosterior matched = matched_gaussian(post);
  r["counts"] = counts ? array_of(*counts) : json(nullptr);
  r["posterior"] = {{"alpha", array_of(post.alpha())}, {"sum_alpha", post.total()},
                    {"mean", post.mean()}};
  r["matched_gaussian"] = {{"mu", matched.mu}, {"sigma2", matched.sigma2}};
  if (counts) {
    const Eigen::VectorXd obs = observation_values(prior, *counts);
    const GaussianPosterior mis = gaussian_misspecified_update(
        matched_gaussian(prior), std::span<const double>(obs.data(), obs.size()));
    r["misspecified_gaussian"] = {
        {"mu", mis.mu},
        {"sigma2", mis.sigma2},
        {"mu_rel_diff", std::fabs(mis.mu - matched.mu) / std::max(std::fabs(matched.mu), 1e-300)},
        {"sigma2_rel_diff", std::fabs(mis.sigma2 - matched.sigma2) / matched.sigma2}};
  } else {
    r["misspecified_gaussian"] = nullptr;
  }

  out.claimed = post.total() >= 2.0;
  r["claimed"] = out.claimed;

  const Philox rng(seed, static_cast<std::uint64_t>(index));
  const Empirical x = mc_cdf(post, rng.split(1), samples);
  const Dist xd = x;
  const Dist yd = matched.to_dist();
  const Grid g = grid ? *grid : default_grid(xd, yd);
  const DominanceVerdict ssd = ssd_check(xd, yd, g);
  out.ssd_holds = ssd.holds;
  out.ssd_margin = ssd.margin;
  out.ssd_tolerance = ssd.tolerance;
  r["mc_samples"] = samples;
  r["ssd"] = verdict_json(ssd);

  std::string region = "degenerate";
  double beta_a = std::numeric_limits<double>::quiet_NaN(), beta_b = beta_a;
  bool cert_ok = true;
  if (post.degenerate()) {
    r["beta_projection"] = nullptr;
    r["certificate"] = nullptr;
    r["scd_beta"] = nullptr;
    out.scd_holds = true;
  } else {
    const BetaProjection bp = beta_projection(post);
    beta_a = bp.a;
    beta_b = bp.b;
    r["beta_projection"] = {{"a", bp.a}, {"b", bp.b}, {"lo", bp.lo}, {"hi", bp.hi}};
    const SingleCrossingCert cert = cert_single_crossing(bp.a, bp.b);
    region = to_string(cert.region);
    r["certificate"] = cert_json(cert);
    const DominanceVerdict scd = scd_check(bp.unit(), Gaussian(bp.a / (bp.a + bp.b), 1.0 / (bp.a + bp.b)));
    r["scd_beta"] = verdict_json(scd);
    out.cert_verdict = cert.verdict;
    out.scd_holds = scd.holds;
    if (cert.region != Region::uncertified) cert_ok = cert.verdict && scd.holds;
  }

  out.violation = out.claimed && (!ssd.holds || !cert_ok);
  const char* status = out.violation ? "violation" : (out.claimed ? "pass" : "uncertified");
  r["status"] = status;

  out.csv = {std::to_string(index),
             std::to_string(seed),
             std::to_string(post.size()),
             num(post.total()),
             num(matched.mu),
             num(matched.sigma2),
             num(beta_a),
             num(beta_b),
             region,
             out.cert_verdict ? "true" : "false",
             ssd.holds ? "true" : "false",
             num(ssd.margin),
             num(ssd.tolerance),
             out.scd_holds ? "true" : "false",
             status};
  return out;
}

int exit_code_for(const std::vector<CaseOutcome>& cases) {
  bool uncertified = false;
  for (const auto& c : cases) {
    if (c.violation) return exit_violation;
    if (!c.claimed) uncertified = true;
  }
  return uncertified ? exit_uncertified : exit_ok;
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

}  // namespace

std::size_t default_samples() {
  if (const char* env = std::getenv("STOCHDOM_SAMPLES")) {
    char* end = nullptr;
    const unsigned long long n = std::strtoull(env, &end, 10);
    if (end != env && *end == '\0' && n > 0) return static_cast<std::size_t>(n);
  }
  return kDefaultSamples;
}

void SweepConfig::validate() const {
  if (n_configs < 1) throw std::invalid_argument("sweep: n_configs must be >= 1");
  if (mc_samples < 10000) throw std::invalid_argument("sweep: mc_samples must be >= 1e4");
  if (s_values.empty()) throw std::invalid_argument("sweep: s_values is empty");
  for (int s : s_values)
    if (s < 1) throw std::invalid_argument("sweep: every S must be >= 1");
  if (!(sum_alpha_min > 0.0)) throw std::invalid_argument("sweep: sum_alpha_min must be > 0");
  if (alpha.has_value() != v.has_value())
    throw std::invalid_argument("sweep: a forced belief needs both alpha and v");
}

CategoricalBelief sweep_belief(const SweepConfig& config, int index) {
  if (config.alpha) return CategoricalBelief(*config.alpha, *config.v);
  Philox rng = Philox(config.master_seed, static_cast<std::uint64_t>(index)).split(0);
  const int s = config.s_values[static_cast<std::size_t>(index) % config.s_values.size()];
  Eigen::VectorXd alpha(s), v(s);
  const double log_lo = std::log(0.1), log_span = std::log(100.0);
  for (int i = 0; i < s; ++i) alpha(i) = std::exp(log_lo + log_span * uniform01(rng));
  if (alpha.sum() < config.sum_alpha_min) {
    alpha *= config.sum_alpha_min / alpha.sum();
    while (alpha.sum() < config.sum_alpha_min) alpha *= 1.0 + 4.0 * std::numeric_limits<double>::epsilon();
  }
  for (int i = 0; i < s; ++i) v(i) = uniform01(rng);
  std::sort(v.begin(), v.end());
  return CategoricalBelief(alpha, v);
}

json without_wall_time(json doc) {
  if (doc.contains("summary") && doc["summary"].is_object()) doc["summary"].erase("wall_time_seconds");
  return doc;
}

Report cmd_check(const CheckConfig& config) {
  const auto t0 = std::chrono::steady_clock::now();
  const CategoricalBelief belief(config.alpha, config.v);
  std::optional<CountVector> counts;
  if (config.counts) {
    if (config.counts->size() != belief.size())
      throw std::invalid_argument("check: counts must have one entry per category");
    counts = belief.to_canonical(*config.counts);
  }
  const CaseOutcome c = run_case(belief, counts, config.grid, config.seed, 0, config.samples);

  Report rep;
  rep.doc["schema_version"] = kSchemaVersion;
  rep.doc["command"] = "check";
  rep.doc["config"] = {{"alpha", array_of(config.alpha)},
                       {"v", array_of(config.v)},
                       {"counts", config.counts ? array_of(*config.counts) : json(nullptr)},
                       {"grid", config.grid ? grid_json(*config.grid) : json(nullptr)},
                       {"seed", config.seed},
                       {"samples", config.samples}};
  rep.doc["cases"] = json::array({c.record});
  rep.exit_code = exit_code_for({c});
  rep.doc["summary"] = {{"status", c.record["status"]},
                        {"exit_code", rep.exit_code},
                        {"wall_time_seconds", seconds_since(t0)}};
  rep.csv = join(kCaseCsvHeader) + join(c.csv);
  return rep;
}

Report cmd_sweep(const SweepConfig& config) {
  config.validate();
  const auto t0 = std::chrono::steady_clock::now();
  std::vector<CaseOutcome> cases(static_cast<std::size_t>(config.n_configs));
  detail::parallel_for(cases.size(), [&](std::size_t i) {
    const int index = static_cast<int>(i);
    cases[i] = run_case(sweep_belief(config, index), std::nullopt, config.grid,
                        config.master_seed, index, config.mc_samples);
  });

  Report rep;
  rep.doc["schema_version"] = kSchemaVersion;
  rep.doc["command"] = "sweep";
  rep.doc["config"] = {{"s_values", config.s_values},
                       {"n_configs", config.n_configs},
                       {"sum_alpha_min", config.sum_alpha_min},
                       {"mc_samples", config.mc_samples},
                       {"master_seed", config.master_seed},
                       {"grid", config.grid ? grid_json(*config.grid) : json(nullptr)},
                       {"alpha", config.alpha ? array_of(*config.alpha) : json(nullptr)},
                       {"v", config.v ? array_of(*config.v) : json(nullptr)}};

  json records = json::array();
  json failures = json::array();
  std::size_t ssd_pass = 0, cert_pass = 0, scd_pass = 0, uncertified = 0;
  double min_margin = std::numeric_limits<double>::infinity();
  double min_ratio = min_margin;  // margin / tolerance; >= -1 passes
  rep.csv = join(kCaseCsvHeader);
  for (const auto& c : cases) {
    records.push_back(c.record);
    rep.csv += join(c.csv);
    ssd_pass += c.ssd_holds;
    cert_pass += c.cert_verdict;
    scd_pass += c.scd_holds;
    uncertified += !c.claimed;
    min_margin = std::min(min_margin, c.ssd_margin);
    if (c.ssd_tolerance > 0.0) min_ratio = std::min(min_ratio, c.ssd_margin / c.ssd_tolerance);
    if (c.violation) failures.push_back({{"index", c.record["index"]}, {"seed", c.record["seed"]}});
  }
  rep.doc["cases"] = std::move(records);
  rep.exit_code = exit_code_for(cases);
  rep.doc["summary"] = {{"n_cases", cases.size()},
                        {"ssd_pass", ssd_pass},
                        {"cert_pass", cert_pass},
                        {"scd_beta_pass", scd_pass},
                        {"uncertified", uncertified},
                        {"all_passed", failures.empty()},
                        {"failures", failures},
                        {"min_ssd_margin", min_margin},
                        {"min_ssd_margin_over_tolerance", min_ratio},
                        {"exit_code", rep.exit_code},
                        {"wall_time_seconds", seconds_since(t0)}};
  return rep;
}

Report cmd_cert(double a, double b) {
  const auto t0 = std::chrono::steady_clock::now();
  const SingleCrossingCert cert = cert_single_crossing(a, b);
  const NumericCrossingCheck num_check = numeric_crossing_check(a, b);

  Report rep;
  rep.doc["schema_version"] = kSchemaVersion;
  rep.doc["command"] = "cert";
  rep.doc["config"] = {{"a", a}, {"b", b}};
  rep.doc["certificate"] = cert_json(cert);
  rep.doc["numeric_check"] = {{"pdf_sign_changes", num_check.pdf_sign_changes},
                              {"scd_holds", num_check.scd_holds},
                              {"cdf_crossings", num_check.cdf_crossings}};
  if (cert.region == Region::uncertified)
    rep.exit_code = exit_uncertified;
  else if (!cert.verdict || num_check.pdf_sign_changes > 2 || !num_check.scd_holds)
    rep.exit_code = exit_violation;
  rep.doc["summary"] = {{"region", to_string(cert.region)},
                        {"verdict", cert.verdict},
                        {"exit_code", rep.exit_code},
                        {"wall_time_seconds", seconds_since(t0)}};
  return rep;
}

Report cmd_example1(std::optional<Grid> grid) {
  const auto t0 = std::chrono::steady_clock::now();
  const Grid g = grid ? *grid : Grid(-3.0, 3.0, kDefaultGridPoints);
  const Dist x = DiscreteUniform({-1.0, 1.0});
  const Dist y = AtomPlusUniform({-1.0, 1.0}, 1.0);
  const DominanceVerdict ssd = ssd_check(x, y, g);
  const DominanceVerdict scd = scd_check(x, y, g);

  Report rep;
  rep.doc["schema_version"] = kSchemaVersion;
  rep.doc["command"] = "example1";
  rep.doc["config"] = {{"grid", grid_json(g)}};
  rep.doc["x"] = {{"law", "uniform atoms"}, {"atoms", {-1.0, 1.0}}};
  rep.doc["y"] = {{"law", "atoms plus uniform noise"}, {"atoms", {-1.0, 1.0}}, {"halfwidth", 1.0}};
  rep.doc["ssd"] = verdict_json(ssd);
  rep.doc["scd"] = verdict_json(scd);
  rep.doc["F_Y_at_minus_2"] = cdf(y, -2.0);
  rep.doc["F_Y_at_2"] = cdf(y, 2.0);

  const bool expected = ssd.holds && !scd.holds && scd.crossings.size() == 3;
  rep.exit_code = expected ? exit_ok : exit_violation;
  rep.doc["summary"] = {{"ssd_holds", ssd.holds},
                        {"scd_holds", scd.holds},
                        {"n_crossings", scd.crossings.size()},
                        {"exit_code", rep.exit_code},
                        {"wall_time_seconds", seconds_since(t0)}};

  rep.csv = "x,F_X,F_Y\n";
  for (int i = 0; i < g.points; ++i) {
    const double t = g.node(i);
    rep.csv += join({num(t), num(cdf(x, t)), num(cdf(y, t))});
  }
  return rep;
}

Report cmd_couple(const CoupleConfig& config) {
  const auto t0 = std::chrono::steady_clock::now();
  const CategoricalBelief belief(config.alpha, config.v);
  const BetaProjection bp = beta_projection(belief);
  const Philox rng(config.seed, 0);

  const SlopeEstimate slope = gamma_conditional_check(bp.a, bp.b, config.n, rng.split(0));
  const std::vector<CoupledDraw> draws = coupled_sample(belief, rng.split(1), config.n);
  const std::vector<BinDeviation> bins = mps_check(draws, config.bins);
  const PairedDifference paired = paired_mean_difference(draws);
  const std::vector<BinDeviation> control =
      mps_check(shuffle_pairing(draws, rng.split(2)), config.bins);

  Eigen::VectorXd xs(static_cast<Eigen::Index>(draws.size()));
  Eigen::VectorXd xt(xs.size());
  for (std::size_t i = 0; i < draws.size(); ++i) {
    xs(static_cast<Eigen::Index>(i)) = draws[i].x;
    xt(static_cast<Eigen::Index>(i)) = draws[i].x_tilde;
  }

  Report rep;
  rep.doc["schema_version"] = kSchemaVersion;
  rep.doc["command"] = "couple";
  rep.doc["config"] = {{"alpha", array_of(config.alpha)},
                       {"v", array_of(config.v)},
                       {"n", config.n},
                       {"bins", config.bins},
                       {"seed", config.seed}};
  rep.doc["beta_projection"] = {{"a", bp.a}, {"b", bp.b}, {"lo", bp.lo}, {"hi", bp.hi}};

  const bool slope_ok = std::fabs(slope.slope - slope.expected) <= 4.0 * slope.standard_error;
  rep.doc["gamma_lemma"] = {{"k1", bp.a},
                            {"k2", bp.b},
                            {"slope", slope.slope},
                            {"standard_error", slope.standard_error},
                            {"expected", slope.expected},
                            {"relative_error", std::fabs(slope.slope / slope.expected - 1.0)},
                            {"within_4se", slope_ok}};

  json bin_rows = json::array();
  double max_z = 0.0;
  rep.csv = "bin,x_lo,x_hi,count,deviation,standard_error,z\n";
  for (std::size_t i = 0; i < bins.size(); ++i) {
    const auto& b = bins[i];
    max_z = std::max(max_z, std::fabs(b.z));
    bin_rows.push_back({{"x_lo", b.x_lo},
                        {"x_hi", b.x_hi},
                        {"count", b.count},
                        {"deviation", b.deviation},
                        {"standard_error", b.standard_error},
                        {"z", b.z}});
    rep.csv += join({std::to_string(i), num(b.x_lo), num(b.x_hi), std::to_string(b.count),
                     num(b.deviation), num(b.standard_error), num(b.z)});
  }
  double control_z = 0.0;
  for (const auto& b : control) control_z = std::max(control_z, std::fabs(b.z));
  const double paired_z = paired.standard_error > 0.0 ? paired.mean / paired.standard_error : 0.0;

  rep.doc["bins"] = std::move(bin_rows);
  rep.doc["max_abs_z"] = max_z;
  rep.doc["paired_difference"] = {
      {"mean", paired.mean}, {"standard_error", paired.standard_error}, {"z", paired_z}};
  rep.doc["negative_control"] = {{"max_abs_z", control_z}, {"detected", control_z > 5.0}};
  rep.doc["means"] = {{"belief", belief.mean()}, {"x", xs.mean()}, {"x_tilde", xt.mean()}};

  bool ssd_ok = true;
  if (draws.size() >= 10000) {
    const DominanceVerdict ssd = empirical_ssd(xs, xt);
    ssd_ok = ssd.holds;
    rep.doc["ssd_x_over_x_tilde"] = verdict_json(ssd);
  } else {
    rep.doc["ssd_x_over_x_tilde"] = nullptr;
  }

  const bool ok = slope_ok && max_z <= 4.0 && std::fabs(paired_z) <= 3.0 && ssd_ok;
  rep.exit_code = ok ? exit_ok : exit_violation;
  rep.doc["summary"] = {{"bins_within_4se", max_z <= 4.0},
                        {"paired_within_3se", std::fabs(paired_z) <= 3.0},
                        {"gamma_slope_within_4se", slope_ok},
                        {"ssd_holds", ssd_ok},
                        {"exit_code", rep.exit_code},
                        {"wall_time_seconds", seconds_since(t0)}};
  return rep;
}

}  // namespace stochdom
