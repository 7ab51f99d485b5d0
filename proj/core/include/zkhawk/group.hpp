#pragma once

#include <boost/multiprecision/cpp_int.hpp>
#include <compare>
#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <string_view>

#include "zkhawk/bytes.hpp"
#include "zkhawk/rng.hpp"

namespace zkhawk {

// Wide enough for the product of two scalars of a ~256-bit order and for a
// 512-bit hash digest.
using BigUint = boost::multiprecision::uint512_t;

// Exponent in Z_q. Values are always reduced; build them through Group.
class Scalar {
 public:
  Scalar() = default;
  explicit Scalar(BigUint value) : value_(std::move(value)) {}

  const BigUint& value() const { return value_; }
  bool is_zero() const { return value_ == 0; }

  friend bool operator==(const Scalar&, const Scalar&) = default;

 private:
  BigUint value_{0};
};

// Member of the prime-order group, held as its canonical fixed-width encoding.
// Equality and ordering are on the encoding.
class GroupElement {
 public:
  GroupElement() = default;
  explicit GroupElement(Bytes encoding) : enc_(std::move(encoding)) {}

  const Bytes& bytes() const { return enc_; }
  std::string hex() const { return to_hex(enc_); }

  friend bool operator==(const GroupElement&, const GroupElement&) = default;
  friend auto operator<=>(const GroupElement&, const GroupElement&) = default;

 private:
  Bytes enc_;
};

// A cyclic group of prime order q together with its scalar field.
//
// Implementations are immutable and safe to share across threads. Element
// operations assume their inputs are group members; decode_element() is the
// only entry point for untrusted bytes.
class Group {
 public:
  virtual ~Group() = default;

  virtual std::string_view name() const = 0;
  // True for groups whose discrete logs are trivially computable.
  virtual bool insecure() const = 0;

  virtual GroupElement identity() const = 0;
  virtual GroupElement generator() const = 0;
  virtual GroupElement exp(const GroupElement& base, const Scalar& e) const = 0;
  virtual GroupElement mul(const GroupElement& a, const GroupElement& b) const = 0;
  virtual GroupElement div(const GroupElement& a, const GroupElement& b) const = 0;
  virtual bool is_member(ByteSpan encoding) const = 0;
  // Maps 64 uniform bytes into the group. May return the identity.
  virtual GroupElement map_to_group(ByteSpan uniform64) const = 0;

  const BigUint& order() const { return order_; }
  std::size_t order_bits() const;
  std::size_t element_len() const { return element_len_; }
  std::size_t scalar_len() const { return scalar_len_; }

  std::optional<GroupElement> decode_element(ByteSpan encoding) const;

  Scalar scalar(const BigUint& v) const { return Scalar(v % order_); }
  Scalar scalar_from_u64(std::uint64_t v) const { return scalar(BigUint(v)); }
  Scalar add(const Scalar& a, const Scalar& b) const;
  Scalar sub(const Scalar& a, const Scalar& b) const;
  Scalar mul(const Scalar& a, const Scalar& b) const;
  Scalar neg(const Scalar& a) const;
  Scalar random_scalar(Rng& rng) const;

  // Fiat-Shamir oracle: SHA-512(u32 len(tag) || tag || transcript) read
  // big-endian and reduced mod q.
  Scalar hash_to_scalar(std::string_view domain_tag, ByteSpan transcript) const;

  // Fixed-width big-endian encoding of `scalar_len()` bytes.
  Bytes encode_scalar(const Scalar& s) const;
  // Rejects wrong lengths and non-reduced values.
  std::optional<Scalar> decode_scalar(ByteSpan encoding) const;

  // Nothing-up-my-sleeve second generator: hashes (g, label, counter) into
  // the group and rejection-samples away the identity and g itself. Throws
  // after a bounded number of attempts.
  GroupElement derive_second_generator(const GroupElement& g, std::string_view label) const;

  static constexpr int kMaxGeneratorAttempts = 64;

 protected:
  Group(BigUint order, std::size_t element_len);

 private:
  BigUint order_;
  std::size_t element_len_;
  std::size_t scalar_len_;
};

// ristretto255 (order 2^252 + 27742317777372353535851937790883648493).
std::shared_ptr<const Group> ristretto255_group();

// Order-q subgroup of Z_p^* for a safe-ish prime p with q | p - 1. `g` must
// have order q. Used for hand-checkable test vectors.
std::shared_ptr<const Group> modular_group(std::string name, const BigUint& p, const BigUint& q, const BigUint& g,
                                           bool insecure);

// Public parameters for commitments: the group and two generators with no
// known mutual discrete log (except in the toy group).
struct GroupParams {
  std::shared_ptr<const Group> group;
  GroupElement g;
  GroupElement h;
  bool insecure_test_group = false;

  const Group& grp() const { return *group; }
  const BigUint& q() const { return group->order(); }
  std::size_t encoding_len() const { return group->element_len(); }

  // ristretto255 with h derived from the standard label.
  static GroupParams standard();
  // Subgroup of order 11 in Z_23^*, g = 4, h = 8 (log_g h = 7). Insecure.
  static GroupParams toy();
  // "production" or "toy-insecure". Throws Error otherwise.
  static GroupParams by_name(std::string_view name);
};

inline constexpr std::string_view kPedersenHLabel = "zkhawk/pedersen/h/v1";

}  // namespace zkhawk
