#include "zkhawk/rng.hpp"

#include <gtest/gtest.h>

namespace zkhawk {
namespace {

TEST(Rng, SameSeedSameStream) {
  Rng a(42), b(42);
  for (int i = 0; i < 100; ++i) EXPECT_EQ(a.next_u64(), b.next_u64());
}

TEST(Rng, DifferentSeedsDiffer) {
  Rng a(1), b(2);
  EXPECT_NE(a.next_u64(), b.next_u64());
}

TEST(Rng, ForkIsDeterministicAndLabelled) {
  Rng parent(9);
  Rng x = parent.fork("party/P1");
  Rng y = parent.fork("party/P1");
  Rng z = parent.fork("party/P2");
  EXPECT_EQ(x.key(), y.key());
  EXPECT_NE(x.key(), z.key());
  EXPECT_NE(x.key(), parent.key());
}

TEST(Rng, ForkDoesNotAdvanceParent) {
  Rng a(3), b(3);
  (void)a.fork("child");
  EXPECT_EQ(a.next_u64(), b.next_u64());
}

TEST(Rng, FillSpansBlockBoundaries) {
  Rng a(5), b(5);
  std::array<std::uint8_t, 200> big{};
  a.fill(big);
  for (std::size_t i = 0; i < big.size(); i += 8) {
    std::array<std::uint8_t, 8> chunk{};
    b.fill(chunk);
    EXPECT_TRUE(std::equal(chunk.begin(), chunk.end(), big.begin() + static_cast<std::ptrdiff_t>(i)));
  }
}

TEST(Rng, BitsAreRoughlyBalanced) {
  Rng r(11);
  int ones = 0;
  constexpr int kDraws = 20000;
  for (int i = 0; i < kDraws; ++i) ones += r.next_bit() ? 1 : 0;
  EXPECT_NEAR(static_cast<double>(ones) / kDraws, 0.5, 0.02);
}

TEST(Rng, EntropySourcesDiffer) { EXPECT_NE(Rng::from_entropy().key(), Rng::from_entropy().key()); }

}  // namespace
}  // namespace zkhawk
