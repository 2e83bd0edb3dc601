#pragma once

namespace stochdom {

/// log Γ(x) for x > 0. Reentrant (does not touch the global `signgam`).
double log_gamma(double x);

double log_beta(double a, double b);

/// Regularized incomplete beta I_x(a, b), i.e. the Beta(a, b) CDF at x.
/// Continued fraction (modified Lentz) with the usual reflection
/// I_x(a,b) = 1 - I_{1-x}(b,a) past the mode-side switch point.
/// Absolute accuracy is better than 1e-12 across a, b in [1e-3, 1e4].
double incomplete_beta(double a, double b, double x);

double standard_normal_cdf(double z);
double standard_normal_pdf(double z);

/// E[(t - Z)^+] for Z ~ N(0,1): the integrated standard normal CDF.
double standard_normal_integrated_cdf(double t);

inline constexpr double kPi = 3.14159265358979323846;
inline constexpr double kLogTwoPi = 1.83787706640934548356;

}  // namespace stochdom
