#pragma once

#include <array>
#include <cstdint>
#include <span>
#include <string_view>

namespace zkhawk {

// Deterministic, seedable randomness: a ChaCha20 keystream under a 256-bit
// key. Handles are caller-owned and not thread-safe; give each actor its own
// stream via fork().
class Rng {
 public:
  using Key = std::array<std::uint8_t, 32>;

  explicit Rng(std::uint64_t seed);
  explicit Rng(const Key& key) : key_(key) {}

  // Fresh key from the OS entropy source.
  static Rng from_entropy();

  // Independent child stream; same parent key and label give the same child.
  Rng fork(std::string_view label) const;

  void fill(std::span<std::uint8_t> out);
  std::uint64_t next_u64();
  bool next_bit();

  const Key& key() const { return key_; }

 private:
  void refill();

  Key key_{};
  std::array<std::uint8_t, 64> block_{};
  std::size_t used_ = 64;
  std::uint32_t counter_ = 0;
  std::uint64_t rekeys_ = 0;
};

}  // namespace zkhawk
