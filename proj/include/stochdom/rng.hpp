#pragma once

#include <array>
#include <cstdint>
#include <limits>

namespace stochdom {

/// Philox4x32-10 counter-based generator.
///
/// The 64-bit seed is the Philox key and the 64-bit stream index occupies the
/// upper half of the 128-bit counter, so `Philox(seed, i)` for distinct `i` are
/// non-overlapping streams. `split(i)` derives a child generator whose key is
/// a hash of the parent's (seed, stream); it is how per-task and per-chunk
/// generators are obtained, which keeps results independent of worker count.
///
/// Satisfies UniformRandomBitGenerator. Passed by value everywhere.
class Philox {
 public:
  using result_type = std::uint64_t;

  explicit Philox(std::uint64_t seed = 0, std::uint64_t stream = 0);

  static constexpr result_type min() { return 0; }
  static constexpr result_type max() {
    return std::numeric_limits<result_type>::max();
  }

  result_type operator()();

  [[nodiscard]] Philox split(std::uint64_t index) const;

  [[nodiscard]] std::uint64_t seed() const { return seed_; }
  [[nodiscard]] std::uint64_t stream() const { return stream_; }

  /// Raw block function, exposed for known-answer tests.
  static std::array<std::uint32_t, 4> block(std::array<std::uint32_t, 4> ctr,
                                            std::array<std::uint32_t, 2> key);

 private:
  void refill();

  std::uint64_t seed_;
  std::uint64_t stream_;
  std::uint64_t block_index_ = 0;
  std::array<std::uint32_t, 4> buffer_{};
  int used_ = 4;  // 32-bit words consumed from buffer_
};

std::uint64_t splitmix64(std::uint64_t x);

/// Uniform on [0, 1) with 53 random bits.
double uniform01(Philox& rng);
/// Uniform on the open interval (0, 1).
double uniform_open(Philox& rng);
/// Standard normal via the Marsaglia polar method.
double standard_normal(Philox& rng);
/// Gamma(shape, 1). Marsaglia-Tsang for shape >= 1, boosted with u^{1/shape}
/// below 1; shape == 0 is the point mass at 0.
double gamma_variate(Philox& rng, double shape);
/// log of a Gamma(shape, 1) draw; stays finite for tiny shapes where the
/// variate itself underflows. Returns -inf for shape == 0.
double log_gamma_variate(Philox& rng, double shape);

}  // namespace stochdom
