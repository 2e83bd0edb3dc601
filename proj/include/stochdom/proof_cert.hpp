#pragma once

#include <variant>
#include <vector>

namespace stochdom {

// Single-crossing certificate for X ~ Beta(a, b) against its matched Gaussian
// Y ~ N(a / (a + b), 1 / (a + b)).
//
// Write l_B, l_N for the log densities and
//   g(x) = l_N'(x) - l_B'(x),   h(x) = g'(x) = (a-1)/x^2 + (b-1)/(1-x)^2 - (a+b).
// At most one root of g gives at most two pdf crossings, hence at most one CDF
// crossing. With A = a - 1, B = b - 1 (and C = -B) the parameter quadrant
// a >= b, a + b >= 2 splits into
//   R1: a > 1 >= b                       g concave; bound its maximum
//   R2: a, b > 1, A B >= 1/9             h convex with positive minimum
//   R3: a, b > 1, A B <  1/9             h > 0 outside [x1, x2], Beta log
//                                        density above the Gaussian peak inside
// plus the uniform case a = b = 1 and the mirror image b > a (x -> 1 - x).

enum class Region { R1, R2, R3, special_uniform, uncertified };
const char* to_string(Region r);

struct LogPdfEval {
  double x;
  double lB1;  // l_B'
  double lN1;  // l_N'
  double h;    // l_N'' - l_B''
  double h1;   // h'
  double h2;   // h''
};

/// Throws std::domain_error unless 0 < x < 1 and a, b > 0.
LogPdfEval log_derivatives(double a, double b, double x);

struct Classification {
  Region region;
  bool swapped;  // parameters mirrored so that a >= b
};

/// Boundary A B = 1/9 goes to R2 (with a 1e-15 slack for the rounding of 4/3);
/// a + b >= 2 is tested with a 1e-12 slack.
Classification classify(double a, double b);

struct R1Witness {
  double A, C;
  /// K = sqrt(A / C), x_K = K / (1 + K): the root of A/x^2 = C/(1-x)^2.
  /// With b == 1 (C = 0) K is +inf and x_K = 1.
  double K, xK;
  double g_at_xK;
  /// K (1 + K) g(x_K), the quantity the closed form describes.
  double scaled_g_at_xK;
  /// -A^2/C - 2 A^{3/2} C^{-1/2} - 2A - A/C - A^{1/2} C^{1/2} + A^{1/2} C^{-1/2}
  double closed_form;
  /// The closed form with the last two terms cancelled against each other;
  /// only equal to closed_form when C = 1. Reported for comparison.
  double cancelled_form;
  /// True maximum of the concave g and its location (root of h).
  double g_max, x_gmax;
  bool monotone;  // g_max <= 0: l_N - l_B is decreasing
  /// When g_max > 0: the roots of g and the log-density gaps l_N - l_B there
  /// (and at x -> 1 when b == 1, where the gap stays finite).
  double x_low, x_high;
  double gap_low, gap_high, gap_right;
  bool passes;
};

struct R2Witness {
  double A, B;
  double K, xK;       // K = (A/B)^{1/3}, minimiser of the convex h
  double h_at_xK;     // 3 (A^{2/3} B^{1/3} + A^{1/3} B^{2/3}) - 2
  double h_direct;    // log_derivatives(a, b, x_K).h
  bool consistent;    // |h_at_xK - h_direct| <= 1e-10 max(1, A + B + 2)
  bool passes;
};

struct R3Witness {
  double A, B;
  double x1, x2;              // roots of A/x^2 - (A+B+2) and B/(1-x)^2 - (A+B+2)
  double f1, f2;              // lower bounds on l_B(x_i) - max l_N
  double h_at_x1, h_at_x2;
  bool passes;
};

struct UniformWitness {
  double gaussian_peak;    // 1 / sqrt(pi), the N(1/2, 1/2) density at its mode
  double uniform_density;  // 1
  bool passes;
};

using CertWitness = std::variant<std::monostate, R1Witness, R2Witness, R3Witness, UniformWitness>;

struct SingleCrossingCert {
  double a, b;  // as given
  Region region;
  bool swapped;
  CertWitness witness;
  /// false for `uncertified` means "no claim", never "disproved".
  bool verdict;
};

R1Witness cert_r1(double a, double b);
R2Witness cert_r2(double a, double b);
R3Witness cert_r3(double a, double b);
SingleCrossingCert cert_single_crossing(double a, double b);

// Bound functions. f_i(A, B) lower-bounds l_B(x_i) - max_x l_N(x) using
// B(a, b) <= 1/a; g_i(A) = f_i(A, 1/(9A)) is the worst case over B; the
// g~_i are the simplified lower bounds of g_i, increasing on A >= 1/3.
double r1_closed_form(double A, double C);
double r2_closed_form(double A, double B);
double f1_bound(double A, double B);
double f2_bound(double A, double B);
double g1_bound(double A);
double g2_bound(double A);
double g1_lower(double A);
double g2_lower(double A);

/// l_N(x) - l_B(x) with exact normalising constants.
double log_density_gap(double a, double b, double x);

struct NumericCrossingCheck {
  int pdf_sign_changes;          // of l_N - l_B on `points` interior nodes of (0, 1)
  bool scd_holds;                // scd_check(Beta(a,b), matched Gaussian)
  std::vector<double> cdf_crossings;
};

NumericCrossingCheck numeric_crossing_check(double a, double b, int points = 4097);

}  // namespace stochdom
