#pragma once
/**
 * @file rng.hpp
 * @brief Reproducible per-path random streams.
 *
 * Every simulated path owns independent substreams derived by hashing
 * (master seed, family, path index, substream id) with SplitMix64, and each
 * substream is itself a SplitMix64 counter stream started at that hash. Families
 * separate ensembles that must be statistically independent (for example the
 * two marginal ensembles of a decay experiment); substreams separate the
 * Brownian increments from the Poisson clock and the jump marks, so adding
 * jumps to a spec never perturbs its diffusion noise.
 */

#include <cstdint>

#include <boost/random/exponential_distribution.hpp>
#include <boost/random/normal_distribution.hpp>
#include <boost/random/uniform_01.hpp>

namespace rjd {

enum class Substream : std::uint64_t { diffusion = 0, jump_clock = 1, jump_marks = 2, resampling = 3 };

/// Ensemble families; distinct families never share streams.
namespace family {
inline constexpr std::uint64_t primary = 0;
inline constexpr std::uint64_t independent = 1;
inline constexpr std::uint64_t stationary = 2;
inline constexpr std::uint64_t bootstrap = 3;
inline constexpr std::uint64_t resolution = 4;
}  // namespace family

struct StreamKey {
  std::uint64_t seed = 0;
  std::uint64_t family = family::primary;
  std::uint64_t path = 0;
};

inline std::uint64_t splitmix64(std::uint64_t& state) {
  std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

inline std::uint64_t derive_seed(const StreamKey& key, Substream sub) {
  std::uint64_t state = key.seed;
  std::uint64_t h = splitmix64(state);
  state ^= key.family + 0x632be59bd9b4e019ULL;
  h ^= splitmix64(state);
  state ^= key.path + 0x8cb92ba72f3d8dd7ULL;
  h ^= splitmix64(state);
  state ^= static_cast<std::uint64_t>(sub) + 0x3c6ef372fe94f82aULL;
  h ^= splitmix64(state);
  return h;
}

/// Counter-based generator: output i is the SplitMix64 mix of
/// seed + (i + 1) * golden-gamma. Satisfies UniformRandomBitGenerator.
class SplitMix64 {
 public:
  using result_type = std::uint64_t;
  explicit SplitMix64(std::uint64_t seed = 0) : state_(seed) {}
  static constexpr result_type min() { return 0; }
  static constexpr result_type max() { return ~result_type{0}; }
  result_type operator()() { return splitmix64(state_); }

 private:
  std::uint64_t state_;
};

/// One generator plus the distributions drawn from it.
class RandomStream {
 public:
  RandomStream() = default;
  explicit RandomStream(std::uint64_t seed) : engine_(seed) {}
  RandomStream(const StreamKey& key, Substream sub) : engine_(derive_seed(key, sub)) {}

  double normal() { return normal_(engine_); }
  /// Uniform on [0, 1).
  double uniform() { return uniform_(engine_); }
  double exponential(double rate) {
    return exponential_(engine_, boost::random::exponential_distribution<double>::param_type(rate));
  }
  std::uint64_t bits() { return engine_(); }

 private:
  SplitMix64 engine_{0};
  boost::random::normal_distribution<double> normal_{0.0, 1.0};
  boost::random::uniform_01<double> uniform_;
  boost::random::exponential_distribution<double> exponential_{1.0};
};

/// The three substreams consumed by one path simulation.
struct PathStreams {
  explicit PathStreams(const StreamKey& key)
      : diffusion(key, Substream::diffusion), clock(key, Substream::jump_clock), marks(key, Substream::jump_marks) {}

  RandomStream diffusion;
  RandomStream clock;
  RandomStream marks;
};

}  // namespace rjd
