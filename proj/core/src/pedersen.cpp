#include "zkhawk/pedersen.hpp"

namespace zkhawk {

Commitment commit(const GroupParams& params, const Scalar& value, const Scalar& randomness) {
  const Group& grp = params.grp();
  return {grp.mul(grp.exp(params.g, value), grp.exp(params.h, randomness))};
}

bool verify_opening(const GroupParams& params, const Commitment& c, const Opening& o) {
  return commit(params, o.value, o.randomness) == c;
}

Commitment combine(const GroupParams& params, std::span<const Commitment> cs) {
  const Group& grp = params.grp();
  GroupElement acc = grp.identity();
  for (const auto& c : cs) acc = grp.mul(acc, c.element);
  return {acc};
}

Commitment quotient(const GroupParams& params, const Commitment& a, const Commitment& b) {
  return {params.grp().div(a.element, b.element)};
}

Commitment recompose_bits(const GroupParams& params, std::span<const Commitment> bits, std::size_t ell) {
  if (bits.size() != ell || ell == 0) {
    throw Error("recompose_bits: expected " + std::to_string(ell) + " bit commitments, got " +
                std::to_string(bits.size()));
  }
  // Horner from the top bit: acc <- acc^2 * c_k.
  const Group& grp = params.grp();
  GroupElement acc = bits[ell - 1].element;
  for (std::size_t k = ell - 1; k-- > 0;) {
    acc = grp.mul(grp.mul(acc, acc), bits[k].element);
  }
  return {acc};
}

}  // namespace zkhawk
