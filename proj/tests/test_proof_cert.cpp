#include <doctest.h>

#include <cmath>
#include <stdexcept>

#include "stochdom/errors.hpp"
#include "stochdom/proof_cert.hpp"
#include "stochdom/rng.hpp"

using namespace stochdom;

TEST_CASE("log derivative examples") {
  const LogPdfEval e = log_derivatives(2, 2, 0.5);
  CHECK(e.h == doctest::Approx(4.0));
  for (double x : {0.1, 0.5, 0.77}) {
    const LogPdfEval u = log_derivatives(1, 1, x);
    CHECK(u.h == doctest::Approx(-2.0));
    CHECK(u.lB1 == 0.0);
  }
  const LogPdfEval f = log_derivatives(2, 1, 0.5);
  CHECK(f.lB1 == doctest::Approx(2.0));
  CHECK(f.lN1 == doctest::Approx(0.5));
  CHECK_THROWS_AS(log_derivatives(2, 2, 0.0), std::domain_error);
  CHECK_THROWS_AS(log_derivatives(2, 2, 1.0), std::domain_error);
}

TEST_CASE("h derivatives match finite differences") {
  const double a = 3.7, b = 1.4, d = 1e-5;
  for (double x : {0.2, 0.45, 0.8}) {
    const auto lo = log_derivatives(a, b, x - d), hi = log_derivatives(a, b, x + d);
    const auto mid = log_derivatives(a, b, x);
    CHECK(mid.h1 == doctest::Approx((hi.h - lo.h) / (2 * d)).epsilon(1e-6));
    CHECK(mid.h2 == doctest::Approx((hi.h1 - lo.h1) / (2 * d)).epsilon(1e-6));
    CHECK(mid.h == doctest::Approx(-(hi.lB1 - lo.lB1) / (2 * d) - (a + b)).epsilon(1e-6));
  }
}

TEST_CASE("region classification") {
  auto c = classify(2, 0.5);
  CHECK(c.region == Region::R1);
  CHECK_FALSE(c.swapped);
  c = classify(0.5, 2);
  CHECK(c.region == Region::R1);
  CHECK(c.swapped);
  CHECK(classify(1.2, 1.05).region == Region::R3);
  CHECK(classify(2, 2).region == Region::R2);
  CHECK(classify(4.0 / 3.0, 4.0 / 3.0).region == Region::R2);
  CHECK(classify(1, 1).region == Region::special_uniform);
  CHECK(classify(0.9, 0.9).region == Region::uncertified);
  CHECK(classify(1.5, 1.0).region == Region::R1);
  CHECK(classify(1.0, 1.0000001).region == Region::R1);
  CHECK(classify(1.0, 1.0 - 1e-16).region == Region::special_uniform);
}

TEST_CASE("R1 witness") {
  const R1Witness w = cert_r1(2, 0.5);
  CHECK(w.A == 1.0);
  CHECK(w.C == 0.5);
  // The printed closed form, with the last two terms cancelled.
  CHECK(w.cancelled_form == doctest::Approx(-6.0 - 2.0 * std::sqrt(2.0)));
  // Full closed form equals K (1 + K) g(x_K) evaluated directly.
  CHECK(w.closed_form == doctest::Approx(w.scaled_g_at_xK).epsilon(1e-12));
  CHECK(w.closed_form == doctest::Approx(-6.0 - 2.0 * std::sqrt(2.0) + std::sqrt(2.0) - std::sqrt(0.5)));
  CHECK(w.g_at_xK < 0.0);
  CHECK(w.passes);

  const R1Witness b1 = cert_r1(2, 1);
  CHECK(b1.C == 0.0);
  CHECK(b1.g_max == doctest::Approx(2.0 - 2.0 * std::sqrt(3.0)));
  CHECK(b1.monotone);
  CHECK(b1.passes);

  CHECK(cert_r1(1.1, 0.9).passes);
  CHECK(cert_r1(0.9, 1.1).passes);
  CHECK_THROWS_AS(cert_r1(2, 2), RegionMismatch);
}

TEST_CASE("R1 maximum of g can be positive, the refined check still passes") {
  // Near a = b = 1 the concave g peaks above zero, so g(x_K) <= 0 alone does
  // not exclude a second root. The log-density gap decides instead.
  const R1Witness w = cert_r1(1.1, 0.9);
  CHECK(w.g_at_xK <= 0.0);
  CHECK(w.g_max > 0.0);
  CHECK_FALSE(w.monotone);
  CHECK(w.x_low < w.x_gmax);
  CHECK(w.x_gmax < w.x_high);
  CHECK(w.passes);
  CHECK(numeric_crossing_check(1.1, 0.9).pdf_sign_changes <= 2);

  // b = 1 with a < 2/sqrt(3): the boundary bound a - 2 sqrt(a^2 - 1) is positive.
  const R1Witness b1 = cert_r1(1.1, 1.0);
  CHECK(b1.g_max > 0.0);
  CHECK(b1.passes);
}

TEST_CASE("R2 witness") {
  R2Witness w = cert_r2(2, 2);
  CHECK(w.h_at_xK == doctest::Approx(4.0));
  CHECK(w.consistent);
  CHECK(w.passes);
  w = cert_r2(4.0 / 3.0, 4.0 / 3.0);
  CHECK(std::fabs(w.h_at_xK) < 1e-12);
  CHECK(w.passes);
  w = cert_r2(5, 1.5);
  CHECK(w.h_at_xK == doctest::Approx(7.0).epsilon(1e-12));
  CHECK(w.h_direct == doctest::Approx(7.0).epsilon(1e-10));
  CHECK(cert_r2(1.5, 5).passes);
  CHECK_THROWS_AS(cert_r2(1.2, 1.05), RegionMismatch);
}

TEST_CASE("R3 witness") {
  const R3Witness w = cert_r3(1.2, 1.05);
  CHECK(w.x1 == doctest::Approx(std::sqrt(0.2 / 2.25)));
  CHECK(w.x1 == doctest::Approx(0.2981).epsilon(1e-4));
  CHECK(w.x2 == doctest::Approx(0.8509).epsilon(1e-4));
  CHECK(w.f1 > 0.0);
  CHECK(w.f2 > 0.0);
  CHECK(w.passes);
  CHECK(cert_r3(1.05, 1.2).passes);

  // Worst case B = 1/(9A) for A just above 1/3.
  for (double A : {1.0 / 3.0 + 1e-9, 0.5, 1.0, 3.0, 30.0}) {
    CAPTURE(A);
    CHECK(f1_bound(A, 1.0 / (9.0 * A)) > 0.0);
    CHECK(f2_bound(A, 1.0 / (9.0 * A)) > 0.0);
  }
}

TEST_CASE("bound constants") {
  // reference values evaluated independently in double precision
  CHECK(g1_lower(1.0 / 3.0) == doctest::Approx(0.028420).epsilon(1e-4));
  CHECK(g2_lower(1.0 / 3.0) == doctest::Approx(0.035461).epsilon(1e-4));
  CHECK(g1_lower(1.0 / 3.0) > 0.01);
  CHECK(g2_lower(1.0 / 3.0) > 0.01);
  CHECK(std::fabs(r2_closed_form(1.0 / 3.0, 1.0 / 3.0)) < 1e-12);
  // g~ bounds g from below and both increase
  for (double A = 1.0 / 3.0; A < 50.0; A *= 1.3) {
    CHECK(g1_lower(A) <= g1_bound(A) + 1e-12);
    CHECK(g2_lower(A) <= g2_bound(A) + 1e-12);
    CHECK(g1_lower(A * 1.3) >= g1_lower(A));
    CHECK(g2_lower(A * 1.3) >= g2_lower(A));
  }
}

TEST_CASE("certificate dispatch") {
  auto c = cert_single_crossing(3, 3);
  CHECK(c.region == Region::R2);
  CHECK(c.verdict);
  CHECK(std::get<R2Witness>(c.witness).h_at_xK == doctest::Approx(10.0));
  c = cert_single_crossing(1, 1);
  CHECK(c.region == Region::special_uniform);
  CHECK(c.verdict);
  CHECK(std::get<UniformWitness>(c.witness).gaussian_peak < 1.0);
  c = cert_single_crossing(0.6, 0.6);
  CHECK(c.region == Region::uncertified);
  CHECK_FALSE(c.verdict);
  CHECK(std::holds_alternative<std::monostate>(c.witness));
}

TEST_CASE("log density gap") {
  // scipy: norm(2/3, sqrt(1/3)).logpdf(0.4) - beta(2, 1).logpdf(0.4)
  CHECK(log_density_gap(2, 1, 0.4) == doctest::Approx(-0.25315550422307476).epsilon(1e-13));
  CHECK(std::isfinite(log_density_gap(2, 1, 1.0)));
}

TEST_CASE("certificates agree with numeric crossing counts") {
  Philox rng(606);
  for (int i = 0; i < 150; ++i) {
    double a = std::exp(std::log(0.05) + std::log(400.0) * uniform01(rng));
    double b = std::exp(std::log(0.05) + std::log(400.0) * uniform01(rng));
    if (a + b < 2.0) {
      const double s = 2.0 / (a + b);
      a *= s;
      b *= s;
    }
    CAPTURE(a);
    CAPTURE(b);
    const auto cert = cert_single_crossing(a, b);
    CHECK(cert.verdict);
    const auto num = numeric_crossing_check(a, b);
    CHECK(num.pdf_sign_changes <= 2);
    CHECK(num.scd_holds);
  }
}
