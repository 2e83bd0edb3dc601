#include "stochdom/rng.hpp"

#include <cmath>
#include <stdexcept>

namespace stochdom {

namespace {

constexpr std::uint32_t kMul0 = 0xD2511F53u;
constexpr std::uint32_t kMul1 = 0xCD9E8D57u;
constexpr std::uint32_t kWeyl0 = 0x9E3779B9u;
constexpr std::uint32_t kWeyl1 = 0xBB67AE85u;

inline void mulhilo(std::uint32_t a, std::uint32_t b, std::uint32_t& hi,
                    std::uint32_t& lo) {
  const std::uint64_t p = static_cast<std::uint64_t>(a) * b;
  hi = static_cast<std::uint32_t>(p >> 32);
  lo = static_cast<std::uint32_t>(p);
}

}  // namespace

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ull;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
  return x ^ (x >> 31);
}

std::array<std::uint32_t, 4> Philox::block(std::array<std::uint32_t, 4> ctr,
                                           std::array<std::uint32_t, 2> key) {
  for (int round = 0; round < 10; ++round) {
    std::uint32_t hi0, lo0, hi1, lo1;
    mulhilo(kMul0, ctr[0], hi0, lo0);
    mulhilo(kMul1, ctr[2], hi1, lo1);
    ctr = {hi1 ^ ctr[1] ^ key[0], lo1, hi0 ^ ctr[3] ^ key[1], lo0};
    key[0] += kWeyl0;
    key[1] += kWeyl1;
  }
  return ctr;
}

Philox::Philox(std::uint64_t seed, std::uint64_t stream)
    : seed_(seed), stream_(stream) {}

void Philox::refill() {
  const std::array<std::uint32_t, 4> ctr = {
      static_cast<std::uint32_t>(block_index_),
      static_cast<std::uint32_t>(block_index_ >> 32),
      static_cast<std::uint32_t>(stream_),
      static_cast<std::uint32_t>(stream_ >> 32)};
  const std::array<std::uint32_t, 2> key = {static_cast<std::uint32_t>(seed_),
                                            static_cast<std::uint32_t>(seed_ >> 32)};
  buffer_ = block(ctr, key);
  ++block_index_;
  used_ = 0;
}

Philox::result_type Philox::operator()() {
  if (used_ > 2) refill();
  const std::uint64_t lo = buffer_[used_];
  const std::uint64_t hi = buffer_[used_ + 1];
  used_ += 2;
  return (hi << 32) | lo;
}

Philox Philox::split(std::uint64_t index) const {
  const std::uint64_t child_key = splitmix64(seed_ ^ splitmix64(stream_));
  return Philox(child_key, index);
}

double uniform01(Philox& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

double uniform_open(Philox& rng) {
  return (static_cast<double>(rng() >> 11) + 0.5) * 0x1.0p-53;
}

double standard_normal(Philox& rng) {
  // One value per accepted pair; the partner is discarded so the generator
  // carries no hidden cache and copies stay bitwise reproducible.
  for (;;) {
    const double u = 2.0 * uniform01(rng) - 1.0;
    const double v = 2.0 * uniform01(rng) - 1.0;
    const double s = u * u + v * v;
    if (s > 0.0 && s < 1.0) return u * std::sqrt(-2.0 * std::log(s) / s);
  }
}

namespace {

double marsaglia_tsang(Philox& rng, double shape) {
  const double d = shape - 1.0 / 3.0;
  const double c = 1.0 / std::sqrt(9.0 * d);
  for (;;) {
    double z, v;
    do {
      z = standard_normal(rng);
      v = 1.0 + c * z;
    } while (v <= 0.0);
    v = v * v * v;
    const double u = uniform_open(rng);
    const double z2 = z * z;
    if (u < 1.0 - 0.0331 * z2 * z2) return d * v;
    if (std::log(u) < 0.5 * z2 + d * (1.0 - v + std::log(v))) return d * v;
  }
}

}  // namespace

double gamma_variate(Philox& rng, double shape) {
  if (!(shape >= 0.0) || !std::isfinite(shape))
    throw std::invalid_argument("gamma_variate: shape must be finite and >= 0");
  if (shape == 0.0) return 0.0;
  if (shape < 1.0) {
    const double g = marsaglia_tsang(rng, shape + 1.0);
    return g * std::pow(uniform_open(rng), 1.0 / shape);
  }
  return marsaglia_tsang(rng, shape);
}

double log_gamma_variate(Philox& rng, double shape) {
  if (!(shape >= 0.0) || !std::isfinite(shape))
    throw std::invalid_argument("log_gamma_variate: shape must be finite and >= 0");
  if (shape == 0.0) return -std::numeric_limits<double>::infinity();
  if (shape < 1.0) {
    const double g = marsaglia_tsang(rng, shape + 1.0);
    return std::log(g) + std::log(uniform_open(rng)) / shape;
  }
  return std::log(marsaglia_tsang(rng, shape));
}

}  // namespace stochdom
