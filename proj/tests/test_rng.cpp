#include <doctest.h>

#include <cmath>
#include <stdexcept>
#include <set>
#include <vector>

#include "stochdom/rng.hpp"

using namespace stochdom;

TEST_CASE("philox4x32-10 known answers") {
  using Ctr = std::array<std::uint32_t, 4>;
  using Key = std::array<std::uint32_t, 2>;
  CHECK(Philox::block(Ctr{0, 0, 0, 0}, Key{0, 0}) ==
        Ctr{0x6627e8d5, 0xe169c58d, 0xbc57ac4c, 0x9b00dbd8});
  CHECK(Philox::block(Ctr{0xffffffff, 0xffffffff, 0xffffffff, 0xffffffff},
                      Key{0xffffffff, 0xffffffff}) ==
        Ctr{0x408f276d, 0x41c83b0e, 0xa20bc7c6, 0x6d5451fd});
  CHECK(Philox::block(Ctr{0x243f6a88, 0x85a308d3, 0x13198a2e, 0x03707344},
                      Key{0xa4093822, 0x299f31d0}) ==
        Ctr{0xd16cfe09, 0x94fdcceb, 0x5001e420, 0x24126ea1});
}

TEST_CASE("first output packs the first two words of block zero") {
  Philox rng(0, 0);
  CHECK(rng() == ((std::uint64_t{0xe169c58d} << 32) | 0x6627e8d5));
  CHECK(rng() == ((std::uint64_t{0x9b00dbd8} << 32) | 0xbc57ac4c));
}

TEST_CASE("copies replay, streams and splits differ") {
  Philox a(42, 3);
  Philox b = a;
  for (int i = 0; i < 10; ++i) CHECK(a() == b());

  std::set<std::uint64_t> firsts;
  for (std::uint64_t s = 0; s < 8; ++s) firsts.insert(Philox(42, s)());
  for (std::uint64_t s = 0; s < 8; ++s) firsts.insert(Philox(42, 0).split(s)());
  CHECK(firsts.size() == 16);

  CHECK(Philox(1, 2).split(5)() == Philox(1, 2).split(5)());
  CHECK(Philox(1, 2).split(5)() != Philox(2, 1).split(5)());
}

TEST_CASE("uniforms stay in range") {
  Philox rng(7);
  for (int i = 0; i < 100000; ++i) {
    const double u = uniform01(rng);
    REQUIRE(u >= 0.0);
    REQUIRE(u < 1.0);
    const double w = uniform_open(rng);
    REQUIRE(w > 0.0);
    REQUIRE(w < 1.0);
  }
}

namespace {

struct Moments {
  double mean, var;
};

template <typename Draw>
Moments moments(Draw draw, int n) {
  double s = 0.0, s2 = 0.0;
  for (int i = 0; i < n; ++i) {
    const double x = draw();
    s += x;
    s2 += x * x;
  }
  const double m = s / n;
  return {m, s2 / n - m * m};
}

}  // namespace

TEST_CASE("standard normal moments") {
  Philox rng(11);
  const int n = 200000;
  const Moments m = moments([&] { return standard_normal(rng); }, n);
  CHECK(std::fabs(m.mean) < 4.0 / std::sqrt(n));
  CHECK(std::fabs(m.var - 1.0) < 4.0 * std::sqrt(2.0 / n));
}

TEST_CASE("gamma moments across shapes") {
  const int n = 200000;
  for (double k : {0.05, 0.3, 1.0, 2.5, 40.0}) {
    CAPTURE(k);
    Philox rng(5, static_cast<std::uint64_t>(k * 100));
    const Moments m = moments([&] { return gamma_variate(rng, k); }, n);
    // Var of the sample mean is k / n; of the sample variance about (2k^2 + 6k) / n.
    CHECK(std::fabs(m.mean - k) < 5.0 * std::sqrt(k / n));
    CHECK(std::fabs(m.var - k) < 5.0 * std::sqrt((2.0 * k * k + 6.0 * k) / n));
  }
}

TEST_CASE("log gamma variate agrees with gamma variate") {
  Philox a(9), b(9);
  for (double k : {0.2, 1.0, 3.0})
    for (int i = 0; i < 100; ++i) CHECK(std::exp(log_gamma_variate(a, k)) ==
                                        doctest::Approx(gamma_variate(b, k)).epsilon(1e-12));
  Philox c(1);
  CHECK(gamma_variate(c, 0.0) == 0.0);
  CHECK(std::isinf(log_gamma_variate(c, 0.0)));
  CHECK_THROWS_AS(gamma_variate(c, -1.0), std::invalid_argument);
}
