#include "zkhawk/pedersen.hpp"

#include <gtest/gtest.h>

#include "toy_oracle.hpp"
#include "zkhawk/rng.hpp"

namespace zkhawk {
namespace {

std::uint64_t toy_val(const Commitment& c) { return c.element.bytes().at(0); }

TEST(PedersenToy, MatchesOracleVectors) {
  GroupParams p = GroupParams::toy();
  const Group& grp = p.grp();
  Commitment a = commit(p, grp.scalar_from_u64(3), grp.scalar_from_u64(5));
  Commitment b = commit(p, grp.scalar_from_u64(2), grp.scalar_from_u64(1));
  EXPECT_EQ(toy_val(a), toy_oracle::commit(3, 5));
  EXPECT_EQ(toy_val(a), 12u);
  EXPECT_EQ(toy_val(b), 13u);
  std::array<Commitment, 2> both{a, b};
  Commitment sum = combine(p, both);
  EXPECT_EQ(toy_val(sum), 18u);
  EXPECT_EQ(sum, commit(p, grp.scalar_from_u64(5), grp.scalar_from_u64(6)));
}

TEST(PedersenToy, ExhaustiveAgainstOracle) {
  GroupParams p = GroupParams::toy();
  for (std::uint64_t x = 0; x < 11; ++x) {
    for (std::uint64_t r = 0; r < 11; ++r) {
      ASSERT_EQ(toy_val(commit(p, p.grp().scalar_from_u64(x), p.grp().scalar_from_u64(r))), toy_oracle::commit(x, r));
    }
  }
}

class Pedersen : public ::testing::Test {
 protected:
  GroupParams p = GroupParams::standard();
  const Group& grp = p.grp();
  Rng rng{17};
};

TEST_F(Pedersen, OpeningVerifies) {
  Scalar x = grp.scalar_from_u64(42), r = grp.random_scalar(rng);
  Commitment c = commit(p, x, r);
  EXPECT_TRUE(verify_opening(p, c, {x, r}));
  EXPECT_FALSE(verify_opening(p, c, {grp.scalar_from_u64(43), r}));
  EXPECT_FALSE(verify_opening(p, c, {x, grp.add(r, grp.scalar_from_u64(1))}));
}

TEST_F(Pedersen, HomomorphicProductAndQuotient) {
  for (int i = 0; i < 20; ++i) {
    Scalar x1 = grp.random_scalar(rng), r1 = grp.random_scalar(rng);
    Scalar x2 = grp.random_scalar(rng), r2 = grp.random_scalar(rng);
    std::array<Commitment, 2> cs{commit(p, x1, r1), commit(p, x2, r2)};
    EXPECT_EQ(combine(p, cs), commit(p, grp.add(x1, x2), grp.add(r1, r2)));
    EXPECT_EQ(quotient(p, cs[0], cs[1]), commit(p, grp.sub(x1, x2), grp.sub(r1, r2)));
  }
}

TEST_F(Pedersen, EmptyCombineIsIdentity) {
  EXPECT_EQ(combine(p, {}).element, grp.identity());
}

TEST_F(Pedersen, RecomposeBitsOpensToValue) {
  constexpr std::size_t kEll = 12;
  for (std::uint64_t value : {0ull, 1ull, 2730ull, 4095ull}) {
    std::vector<Commitment> bits;
    Scalar total_r = grp.scalar_from_u64(0);
    for (std::size_t k = 0; k < kEll; ++k) {
      Scalar s = grp.random_scalar(rng);
      bits.push_back(commit(p, grp.scalar_from_u64((value >> k) & 1), s));
      total_r = grp.add(total_r, grp.mul(grp.scalar_from_u64(1ull << k), s));
    }
    EXPECT_TRUE(verify_opening(p, recompose_bits(p, bits, kEll), {grp.scalar_from_u64(value), total_r}));
  }
}

TEST_F(Pedersen, RecomposeRejectsWrongLength) {
  std::vector<Commitment> bits(3, commit(p, grp.scalar_from_u64(0), grp.scalar_from_u64(1)));
  EXPECT_THROW(recompose_bits(p, bits, 4), Error);
  EXPECT_THROW(recompose_bits(p, {}, 0), Error);
}

}  // namespace
}  // namespace zkhawk
