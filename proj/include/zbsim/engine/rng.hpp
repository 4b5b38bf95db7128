#pragma once

#include <cstdint>
#include <random>

namespace zbsim {

/// SplitMix64 finalizer; used to spread run seeds into stream seeds.
std::uint64_t splitmix64(std::uint64_t x);

/// Seed of stream `stream_id` under run seed `seed`:
///   splitmix64(seed ^ splitmix64(stream_id + 0x9E3779B97F4A7C15))
/// Each stream depends only on (seed, stream_id), so adding a node never
/// shifts the draws of another node.
std::uint64_t derive_stream_seed(std::uint64_t seed, std::uint32_t stream_id);

/// Reproducible random stream. Both the engine (mt19937_64) and the range
/// reduction below are fully specified, so values match on every platform;
/// std::uniform_int_distribution is deliberately not used.
class RngStream {
public:
  RngStream(std::uint64_t seed, std::uint32_t stream_id);

  std::uint64_t seed() const { return seed_; }
  std::uint32_t stream_id() const { return stream_id_; }
  std::uint64_t draws() const { return draws_; }

  /// Uniform integer in [0, n-1]. n == 0 throws std::invalid_argument.
  std::uint64_t draw_uniform(std::uint64_t n);

  /// Uniform double in [0, 1).
  double uniform01();

private:
  std::uint64_t next();

  std::uint64_t seed_;
  std::uint32_t stream_id_;
  std::uint64_t draws_ = 0;
  std::mt19937_64 engine_;
};

}  // namespace zbsim
