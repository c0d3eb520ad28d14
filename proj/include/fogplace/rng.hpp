#ifndef FOGPLACE_RNG_HPP
#define FOGPLACE_RNG_HPP

#include <cstdint>
#include <random>
#include <stdexcept>

namespace fogplace {

/// Seeded random stream with a portable output contract.
///
/// The engine is std::mt19937_64, whose output sequence is fixed by the
/// C++ standard, and all derived draws (bounded integers, unit-interval
/// doubles) are computed here rather than through std::*_distribution,
/// which is implementation-defined. Identical seeds therefore produce
/// identical draw sequences on every platform and standard library.
class RngStream {
 public:
  explicit RngStream(std::uint64_t seed) : seed_(seed), engine_(seed) {}

  std::uint64_t seed() const { return seed_; }

  std::uint64_t next_u64() { return engine_(); }

  /// Unbiased integer in [0, n) by rejection sampling.
  std::uint64_t below(std::uint64_t n) {
    if (n == 0) throw std::invalid_argument("RngStream::below: n must be > 0");
    const std::uint64_t threshold = (0 - n) % n;  // 2^64 mod n
    std::uint64_t r;
    do {
      r = engine_();
    } while (r < threshold);
    return r % n;
  }

  /// Integer in [lo, hi], inclusive on both ends.
  int uniform_int(int lo, int hi) {
    if (lo > hi) throw std::invalid_argument("RngStream::uniform_int: empty range");
    return lo + static_cast<int>(below(static_cast<std::uint64_t>(hi) - lo + 1));
  }

  /// Double in [0, 1) with 53 random bits.
  double uniform01() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

  double uniform_real(double lo, double hi) { return lo + uniform01() * (hi - lo); }

  bool bernoulli(double p) { return uniform01() < p; }

  /// Independent stream derived from this stream's seed and an index.
  /// Derivation does not consume state, so substream layouts are stable.
  RngStream substream(std::uint64_t index) const {
    // splitmix64 over seed ^ f(index); good enough to decorrelate streams.
    std::uint64_t z = seed_ ^ (0x9e3779b97f4a7c15ULL * (index + 1));
    z += 0x9e3779b97f4a7c15ULL;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    z = z ^ (z >> 31);
    return RngStream(z);
  }

 private:
  std::uint64_t seed_;
  std::mt19937_64 engine_;
};

}  // namespace fogplace

#endif  // FOGPLACE_RNG_HPP
