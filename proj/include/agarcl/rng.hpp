#pragma once

#include <array>
#include <cstdint>

namespace agarcl {

/// Philox4x32-10 counter-based generator (Salmon et al., SC'11).
///
/// A stream is a 64-bit key; draws walk a 128-bit counter. Splitting derives
/// a new key from (key, stream id), so sub-streams never share counters and
/// the order of draws across streams cannot affect any single stream.
class Philox {
 public:
  using Block = std::array<std::uint32_t, 4>;

  Philox() = default;
  explicit Philox(std::uint64_t key, std::uint64_t counter_hi = 0) : key_(key), counter_hi_(counter_hi) {}

  static Block block(Block counter, std::array<std::uint32_t, 2> key);

  /// Independent child stream; does not advance this generator.
  Philox split(std::uint64_t stream_id) const;

  std::uint64_t next_u64();
  /// Uniform in [0, 1) with 53 bits of precision.
  double next_double();
  /// Uniform in [lo, hi).
  double uniform(double lo, double hi) { return lo + (hi - lo) * next_double(); }
  /// Uniform integer in [0, bound); bound > 0.
  std::uint64_t below(std::uint64_t bound);
  /// Standard normal via Box-Muller (platform independent, unlike std::normal_distribution).
  double normal();

  std::uint64_t key() const { return key_; }
  std::uint64_t counter() const { return counter_; }

  bool operator==(const Philox&) const = default;

 private:
  std::uint64_t key_ = 0;
  std::uint64_t counter_hi_ = 0;
  std::uint64_t counter_ = 0;
  std::array<std::uint32_t, 4> buffer_{};
  std::uint32_t buffered_ = 0;
  bool has_spare_normal_ = false;
  double spare_normal_ = 0.0;
};

/// Well-known stream ids within one world.
enum class RngStream : std::uint64_t { Placement = 1, Noise = 2, Respawn = 3 };

std::uint64_t mix64(std::uint64_t x);

}  // namespace agarcl
