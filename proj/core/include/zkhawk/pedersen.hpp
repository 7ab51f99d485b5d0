#pragma once

#include <compare>
#include <span>

#include "zkhawk/group.hpp"

namespace zkhawk {

// Com(x; r) = g^x * h^r.
struct Commitment {
  GroupElement element;

  friend bool operator==(const Commitment&, const Commitment&) = default;
  friend auto operator<=>(const Commitment&, const Commitment&) = default;
};

struct Opening {
  Scalar value;
  Scalar randomness;
};

Commitment commit(const GroupParams& params, const Scalar& value, const Scalar& randomness);
bool verify_opening(const GroupParams& params, const Commitment& c, const Opening& o);

// Product of commitments; opens to the sum of values and randomness. The
// empty product is the identity.
Commitment combine(const GroupParams& params, std::span<const Commitment> cs);
// a / b; opens to the differences.
Commitment quotient(const GroupParams& params, const Commitment& a, const Commitment& b);

// prod_k (c_k)^(2^k) over exactly `ell` bit commitments (least significant
// first). Throws Error on a length mismatch.
Commitment recompose_bits(const GroupParams& params, std::span<const Commitment> bits, std::size_t ell);

}  // namespace zkhawk
