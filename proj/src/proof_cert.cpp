#include "stochdom/proof_cert.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>
#include <utility>

#include "stochdom/dominance.hpp"
#include "stochdom/errors.hpp"
#include "stochdom/special.hpp"

namespace stochdom {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();
constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kNinth = 1.0 / 9.0;
constexpr double kBoundarySlack = 1e-15;
constexpr double kR2Slack = 1e-12;
// a + b is usually a rounded projection of sum(alpha); 2 - 1 ulp must still count.
constexpr double kSumSlack = 1e-12;

// g(x) = l_N'(x) - l_B'(x)
double g_of(double a, double b, double x) {
  return a - (a + b) * x + (b - 1.0) / (1.0 - x) - (a - 1.0) / x;
}

double h_of(double a, double b, double x) {
  return (a - 1.0) / (x * x) + (b - 1.0) / ((1.0 - x) * (1.0 - x)) - (a + b);
}

// Root of a function that is `left_sign` at lo and the opposite at hi.
template <typename F>
double bisect(F&& f, double lo, double hi, int left_sign) {
  for (int it = 0; it < 200; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;
    const double v = f(mid);
    if ((v > 0.0 ? 1 : -1) == left_sign)
      lo = mid;
    else
      hi = mid;
  }
  return 0.5 * (lo + hi);
}

std::pair<double, double> mirrored(double a, double b) {
  return a >= b ? std::pair{a, b} : std::pair{b, a};
}

}  // namespace

const char* to_string(Region r) {
  switch (r) {
    case Region::R1: return "R1";
    case Region::R2: return "R2";
    case Region::R3: return "R3";
    case Region::special_uniform: return "special_uniform";
    case Region::uncertified: return "uncertified";
  }
  return "uncertified";
}

LogPdfEval log_derivatives(double a, double b, double x) {
  if (!(a > 0.0) || !(b > 0.0)) throw std::domain_error("log_derivatives: a, b must be > 0");
  if (!(x > 0.0 && x < 1.0)) throw std::domain_error("log_derivatives: x must lie in (0, 1)");
  const double A = a - 1.0, B = b - 1.0;
  const double y = 1.0 - x;
  LogPdfEval e;
  e.x = x;
  e.lB1 = A / x - B / y;
  e.lN1 = a - (a + b) * x;
  e.h = A / (x * x) + B / (y * y) - (a + b);
  e.h1 = -2.0 * (A / (x * x * x) - B / (y * y * y));
  e.h2 = 6.0 * (A / (x * x * x * x) + B / (y * y * y * y));
  return e;
}

Classification classify(double a, double b) {
  if (!(a > 0.0) || !(b > 0.0)) throw std::domain_error("classify: a, b must be > 0");
  if (a + b < 2.0 - kSumSlack) return {Region::uncertified, false};
  if (std::fabs(a - 1.0) <= kSumSlack && std::fabs(b - 1.0) <= kSumSlack)
    return {Region::special_uniform, false};
  const bool swapped = a < b;
  const auto [hi, lo] = mirrored(a, b);
  if (lo <= 1.0) return {Region::R1, swapped};
  const double ab = (hi - 1.0) * (lo - 1.0);
  return {ab >= kNinth - kBoundarySlack ? Region::R2 : Region::R3, swapped};
}

double r1_closed_form(double A, double C) {
  const double sa = std::sqrt(A), sc = std::sqrt(C);
  return -A * A / C - 2.0 * A * sa / sc - 2.0 * A - A / C - sa * sc + sa / sc;
}

double r2_closed_form(double A, double B) {
  const double a3 = std::cbrt(A), b3 = std::cbrt(B);
  return 3.0 * (a3 * a3 * b3 + a3 * b3 * b3) - 2.0;
}

double f1_bound(double A, double B) {
  const double s = A + B + 2.0;
  const double x1 = std::sqrt(A / s);
  return std::log1p(A) + A * std::log(x1) + B * std::log1p(-x1) + 0.5 * kLogTwoPi -
         0.5 * std::log(s);
}

double f2_bound(double A, double B) {
  const double s = A + B + 2.0;
  const double r = std::sqrt(B / s);
  return std::log1p(A) + A * std::log1p(-r) + B * std::log(r) + 0.5 * kLogTwoPi -
         0.5 * std::log(s);
}

double g1_bound(double A) { return f1_bound(A, kNinth / A); }
double g2_bound(double A) { return f2_bound(A, kNinth / A); }

double g1_lower(double A) {
  return std::log1p(A) + 0.5 * A * std::log(A) - 0.5 * (1.0 + A) * std::log(A + 3.0) -
         std::sqrt(A) / (9.0 * A) + 0.5 * kLogTwoPi;
}

double g2_lower(double A) {
  return std::log1p(A) - 1.0 / 3.0 - 1.0 / (2.0 * std::numbers::e) -
         (2.0 / 3.0) * std::log(A + 7.0 / 3.0) + 0.5 * kLogTwoPi;
}

double log_density_gap(double a, double b, double x) {
  const double s = a + b;
  const double mu = a / s;
  const double ln = -0.5 * (kLogTwoPi - std::log(s)) - 0.5 * s * (x - mu) * (x - mu);
  double lb;
  if (x >= 1.0 && b == 1.0)
    lb = std::log(a);  // Beta(a, 1) density a x^{a-1} at x = 1
  else
    lb = (a - 1.0) * std::log(x) + (b - 1.0) * std::log1p(-x) - log_beta(a, b);
  return ln - lb;
}

R1Witness cert_r1(double a_in, double b_in) {
  if (classify(a_in, b_in).region != Region::R1)
    throw RegionMismatch("cert_r1: parameters are not in R1");
  const auto [a, b] = mirrored(a_in, b_in);
  R1Witness w{};
  w.A = a - 1.0;
  w.C = 1.0 - b;
  const double A = w.A, C = w.C;

  if (C > 0.0) {
    w.K = std::sqrt(A / C);
    w.xK = w.K / (1.0 + w.K);
    w.g_at_xK = g_of(a, b, w.xK);
    w.scaled_g_at_xK = w.K * (1.0 + w.K) * w.g_at_xK;
    w.closed_form = r1_closed_form(A, C);
    w.cancelled_form = -A * A / C - 2.0 * A * std::sqrt(A / C) - 2.0 * A - A / C;
    // h decreases strictly from +inf to -inf on (0, 1)
    w.x_gmax = bisect([&](double x) { return h_of(a, b, x); }, 0.0, 1.0, +1);
    w.g_max = g_of(a, b, w.x_gmax);
  } else {
    w.K = kInf;
    w.xK = 1.0;
    w.g_at_xK = -(1.0 + A);  // g is continuous at 1 when b == 1
    w.scaled_g_at_xK = kNaN;
    w.closed_form = kNaN;
    w.cancelled_form = kNaN;
    w.x_gmax = std::sqrt(A / (a + 1.0));
    w.g_max = a - 2.0 * std::sqrt(a * a - 1.0);
  }

  w.monotone = w.g_max <= 0.0;
  w.x_low = w.x_high = kNaN;
  w.gap_low = w.gap_high = w.gap_right = kNaN;
  bool refined = w.monotone;
  if (!w.monotone) {
    // g < 0 near both ends, so it has one root on each side of its maximum.
    auto g = [&](double x) { return g_of(a, b, x); };
    w.x_low = bisect(g, 0.0, w.x_gmax, -1);
    w.x_high = bisect(g, w.x_gmax, 1.0, +1);
    w.gap_low = log_density_gap(a, b, w.x_low);    // local minimum of the gap
    w.gap_high = log_density_gap(a, b, w.x_high);  // local maximum
    // Three roots need gap_low < 0 < gap_high and, when the gap stays finite
    // at 1 (b == 1), a negative value there as well.
    refined = w.gap_low >= 0.0 || w.gap_high <= 0.0;
    if (C == 0.0) {
      w.gap_right = log_density_gap(a, b, 1.0);
      refined = refined || w.gap_right >= 0.0;
    }
  }
  w.passes = (C == 0.0 || w.g_at_xK <= 0.0) && refined;
  return w;
}

R2Witness cert_r2(double a_in, double b_in) {
  if (classify(a_in, b_in).region != Region::R2)
    throw RegionMismatch("cert_r2: parameters are not in R2");
  const auto [a, b] = mirrored(a_in, b_in);
  R2Witness w{};
  w.A = a - 1.0;
  w.B = b - 1.0;
  w.K = std::cbrt(w.A / w.B);
  w.xK = w.K / (1.0 + w.K);
  w.h_at_xK = r2_closed_form(w.A, w.B);
  w.h_direct = log_derivatives(a, b, w.xK).h;
  w.consistent = std::fabs(w.h_at_xK - w.h_direct) <= 1e-10 * std::max(1.0, w.A + w.B + 2.0);
  w.passes = w.h_at_xK >= -kR2Slack && w.consistent;
  return w;
}

R3Witness cert_r3(double a_in, double b_in) {
  if (classify(a_in, b_in).region != Region::R3)
    throw RegionMismatch("cert_r3: parameters are not in R3");
  const auto [a, b] = mirrored(a_in, b_in);
  R3Witness w{};
  w.A = a - 1.0;
  w.B = b - 1.0;
  const double s = w.A + w.B + 2.0;
  w.x1 = std::sqrt(w.A / s);
  w.x2 = 1.0 - std::sqrt(w.B / s);
  w.h_at_x1 = log_derivatives(a, b, w.x1).h;
  w.h_at_x2 = log_derivatives(a, b, w.x2).h;
  w.f1 = f1_bound(w.A, w.B);
  w.f2 = f2_bound(w.A, w.B);
  w.passes = w.f1 > 0.0 && w.f2 > 0.0 && w.h_at_x1 > 0.0 && w.h_at_x2 > 0.0;
  return w;
}

SingleCrossingCert cert_single_crossing(double a, double b) {
  const Classification c = classify(a, b);
  SingleCrossingCert cert{a, b, c.region, c.swapped, std::monostate{}, false};
  switch (c.region) {
    case Region::uncertified:
      break;
    case Region::special_uniform: {
      UniformWitness w{1.0 / std::sqrt(kPi), 1.0, false};
      w.passes = w.gaussian_peak < w.uniform_density;
      cert.witness = w;
      cert.verdict = w.passes;
      break;
    }
    case Region::R1: {
      auto w = cert_r1(a, b);
      cert.verdict = w.passes;
      cert.witness = w;
      break;
    }
    case Region::R2: {
      auto w = cert_r2(a, b);
      cert.verdict = w.passes;
      cert.witness = w;
      break;
    }
    case Region::R3: {
      auto w = cert_r3(a, b);
      cert.verdict = w.passes;
      cert.witness = w;
      break;
    }
  }
  return cert;
}

NumericCrossingCheck numeric_crossing_check(double a, double b, int points) {
  NumericCrossingCheck out{};
  int last = 0;
  for (int i = 1; i <= points; ++i) {
    const double x = static_cast<double>(i) / (points + 1);
    const double gap = log_density_gap(a, b, x);
    const int s = gap > 0.0 ? 1 : (gap < 0.0 ? -1 : 0);
    if (s == 0) continue;
    if (last != 0 && s != last) ++out.pdf_sign_changes;
    last = s;
  }
  const double total = a + b;
  const DominanceVerdict v = scd_check(Beta(a, b), Gaussian(a / total, 1.0 / total));
  out.scd_holds = v.holds;
  out.cdf_crossings = v.crossings;
  return out;
}

}  // namespace stochdom
