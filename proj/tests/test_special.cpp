#include <doctest.h>

#include <boost/math/special_functions/beta.hpp>
#include <boost/math/special_functions/gamma.hpp>

#include <cmath>
#include <stdexcept>

#include "stochdom/rng.hpp"
#include "stochdom/special.hpp"

using namespace stochdom;

TEST_CASE("incomplete beta at fixed points") {
  // scipy.special.betainc
  CHECK(incomplete_beta(2, 3, 0.4) == doctest::Approx(0.5248).epsilon(1e-14));
  CHECK(incomplete_beta(0.5, 0.5, 0.3) == doctest::Approx(0.36901011956554536).epsilon(1e-13));
  CHECK(incomplete_beta(10, 20, 0.35) == doctest::Approx(0.5923866636639051).epsilon(1e-13));
  CHECK(incomplete_beta(100, 200, 0.33) == doctest::Approx(0.4566181633340033).epsilon(1e-12));
  CHECK(incomplete_beta(0.2, 5, 0.01) == doctest::Approx(0.5846698531754058).epsilon(1e-13));
  CHECK(incomplete_beta(7.5, 1.25, 0.9) == doctest::Approx(0.5598232691710877).epsilon(1e-13));

  CHECK(incomplete_beta(1, 1, 0.3) == doctest::Approx(0.3).epsilon(1e-15));
  CHECK(incomplete_beta(2, 2, 0.25) == doctest::Approx(0.15625).epsilon(1e-15));
  CHECK(incomplete_beta(3, 1, 0.5) == doctest::Approx(0.125).epsilon(1e-15));
  CHECK(incomplete_beta(2, 2, 0.0) == 0.0);
  CHECK(incomplete_beta(2, 2, 1.0) == 1.0);
  CHECK(incomplete_beta(2, 2, -3.0) == 0.0);
  CHECK_THROWS_AS(incomplete_beta(0.0, 1.0, 0.5), std::domain_error);
}

TEST_CASE("incomplete beta agrees with boost over a random sweep") {
  Philox rng(2024);
  double worst = 0.0;
  for (int i = 0; i < 20000; ++i) {
    const double a = std::exp(std::log(1e-3) + std::log(1e7) * uniform01(rng));
    const double b = std::exp(std::log(1e-3) + std::log(1e7) * uniform01(rng));
    // Concentrate x where the law has its mass.
    const double m = a / (a + b);
    const double s = std::sqrt(a * b / ((a + b) * (a + b) * (a + b + 1.0)));
    double x = m + 4.0 * s * (2.0 * uniform01(rng) - 1.0);
    if (i % 3 == 0) x = uniform01(rng);
    if (!(x > 0.0 && x < 1.0)) continue;
    const double err = std::fabs(incomplete_beta(a, b, x) - boost::math::ibeta(a, b, x));
    worst = std::max(worst, err);
  }
  MESSAGE("max |I - boost ibeta| = " << worst);
  CHECK(worst < 1e-12);
}

TEST_CASE("incomplete beta reflection") {
  Philox rng(3);
  for (int i = 0; i < 1000; ++i) {
    const double a = 0.1 + 20.0 * uniform01(rng);
    const double b = 0.1 + 20.0 * uniform01(rng);
    const double x = uniform01(rng);
    CHECK(incomplete_beta(a, b, x) + incomplete_beta(b, a, 1.0 - x) ==
          doctest::Approx(1.0).epsilon(1e-13));
  }
}

TEST_CASE("log gamma and log beta") {
  for (double x : {1e-3, 0.5, 1.0, 2.5, 17.0, 1e5})
    CHECK(log_gamma(x) == doctest::Approx(boost::math::lgamma(x)).epsilon(1e-13));
  CHECK(log_gamma(0.5) == doctest::Approx(0.5 * std::log(kPi)).epsilon(1e-15));
  CHECK(log_beta(2, 3) == doctest::Approx(std::log(1.0 / 12.0)).epsilon(1e-15));
  CHECK_THROWS_AS(log_gamma(0.0), std::domain_error);
}

TEST_CASE("standard normal helpers") {
  CHECK(standard_normal_cdf(0.0) == 0.5);
  CHECK(standard_normal_pdf(0.0) == doctest::Approx(0.3989422804014327).epsilon(1e-15));
  CHECK(standard_normal_cdf(-1.959963984540054) == doctest::Approx(0.025).epsilon(1e-13));
  CHECK(standard_normal_cdf(-40.0) >= 0.0);
  // E[(t - Z)^+] -> 0 on the left, -> t on the right, phi(0) at 0.
  CHECK(standard_normal_integrated_cdf(0.0) == doctest::Approx(standard_normal_pdf(0.0)));
  CHECK(standard_normal_integrated_cdf(-10.0) < 1e-20);
  CHECK(standard_normal_integrated_cdf(10.0) == doctest::Approx(10.0).epsilon(1e-15));
  // derivative is Phi
  const double h = 1e-5;
  for (double t : {-2.0, -0.3, 0.7, 1.9})
    CHECK((standard_normal_integrated_cdf(t + h) - standard_normal_integrated_cdf(t - h)) / (2 * h) ==
          doctest::Approx(standard_normal_cdf(t)).epsilon(1e-8));
}
