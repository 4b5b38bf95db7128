#include "zbsim/engine/rng.hpp"

#include <stdexcept>

namespace zbsim {

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

std::uint64_t derive_stream_seed(std::uint64_t seed, std::uint32_t stream_id) {
  return splitmix64(seed ^ splitmix64(std::uint64_t{stream_id} + 0x9E3779B97F4A7C15ULL));
}

RngStream::RngStream(std::uint64_t seed, std::uint32_t stream_id)
    : seed_(seed), stream_id_(stream_id), engine_(derive_stream_seed(seed, stream_id)) {}

std::uint64_t RngStream::next() {
  ++draws_;
  return engine_();
}

std::uint64_t RngStream::draw_uniform(std::uint64_t n) {
  if (n == 0) throw std::invalid_argument("draw_uniform: empty range (n == 0)");
  // Reject the low 2^64 mod n values so every residue is equally likely.
  const std::uint64_t threshold = (0 - n) % n;
  for (;;) {
    const std::uint64_t r = next();
    if (r >= threshold) return r % n;
  }
}

double RngStream::uniform01() {
  return static_cast<double>(next() >> 11) * 0x1.0p-53;
}

}  // namespace zbsim
