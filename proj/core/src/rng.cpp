#include "logitdef/rng.hpp"

#include <cmath>

namespace logitdef {

std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t a, std::uint64_t b, std::uint64_t c) {
  std::uint64_t s = seed;
  splitmix64_next(s);
  s ^= a * 0x9ddfea08eb382d69ull;
  splitmix64_next(s);
  s ^= b * 0xc2b2ae3d27d4eb4full;
  splitmix64_next(s);
  s ^= c * 0x165667b19e3779f9ull;
  return splitmix64_next(s);
}

RngStream::RngStream(std::uint64_t seed) : state_(seed ^ 0x5851f42d4c957f2dull) {
  // Burn one output so trivially related seeds do not give related first draws.
  splitmix64_next(state_);
}

std::uint64_t RngStream::next_u64() { return splitmix64_next(state_); }

double RngStream::uniform() {
  return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
}

double RngStream::uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

double RngStream::normal() {
  if (have_spare_) {
    have_spare_ = false;
    return spare_;
  }
  double u1 = 0.0;
  do {
    u1 = uniform();
  } while (u1 <= 0.0);
  double u2 = uniform();
  double r = std::sqrt(-2.0 * std::log(u1));
  double theta = 2.0 * 3.14159265358979323846 * u2;
  spare_ = r * std::sin(theta);
  have_spare_ = true;
  return r * std::cos(theta);
}

std::uint64_t RngStream::below(std::uint64_t n) {
  if (n == 0) return 0;
  // Rejection sampling over the smallest covering power of two.
  std::uint64_t mask = n - 1;
  mask |= mask >> 1;
  mask |= mask >> 2;
  mask |= mask >> 4;
  mask |= mask >> 8;
  mask |= mask >> 16;
  mask |= mask >> 32;
  std::uint64_t v;
  do {
    v = next_u64() & mask;
  } while (v >= n);
  return v;
}

}  // namespace logitdef
