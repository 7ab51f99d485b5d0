#include "zkhawk/sigma.hpp"

namespace zkhawk {

Bytes SchnorrProof::encode(const Group& grp) const {
  ByteWriter w;
  w.raw(nonce_commitment.bytes()).raw(grp.encode_scalar(response));
  return w.take();
}

std::optional<SchnorrProof> SchnorrProof::decode(const Group& grp, ByteSpan bytes) {
  if (bytes.size() != encoded_len(grp)) return std::nullopt;
  auto t = grp.decode_element(bytes.first(grp.element_len()));
  auto z = grp.decode_scalar(bytes.subspan(grp.element_len()));
  if (!t || !z) return std::nullopt;
  return SchnorrProof{*t, *z};
}

Scalar schnorr_challenge(const Group& grp, ByteSpan context, const GroupElement& statement,
                         const GroupElement& base, const GroupElement& nonce_commitment) {
  ByteWriter w;
  w.prefixed(context).prefixed(statement.bytes()).prefixed(base.bytes()).prefixed(nonce_commitment.bytes());
  return grp.hash_to_scalar(kSchnorrDomain, w.bytes());
}

SchnorrProof schnorr_prove(const Group& grp, const GroupElement& statement, const GroupElement& base,
                           const Scalar& witness, ByteSpan context, Rng& rng) {
  Scalar w = grp.random_scalar(rng);
  GroupElement t = grp.exp(base, w);
  Scalar e = schnorr_challenge(grp, context, statement, base, t);
  return {t, grp.add(w, grp.mul(e, witness))};
}

namespace detail {

bool schnorr_equation_holds(const Group& grp, const GroupElement& statement, const GroupElement& base,
                            const SchnorrProof& proof, const Scalar& challenge) {
  return grp.exp(base, proof.response) == grp.mul(proof.nonce_commitment, grp.exp(statement, challenge));
}

bool bit_equations_hold(const GroupParams& params, const Commitment& c, const BitProof& proof,
                        const Scalar& challenge) {
  const Group& grp = params.grp();
  GroupElement lhs1 = commit(params, proof.f, proof.za).element;
  GroupElement rhs1 = grp.mul(grp.exp(c.element, challenge), proof.ca);
  if (lhs1 != rhs1) return false;
  GroupElement lhs2 = grp.exp(params.h, proof.zb);
  GroupElement rhs2 = grp.mul(grp.exp(c.element, grp.sub(challenge, proof.f)), proof.cb);
  return lhs2 == rhs2;
}

}  // namespace detail

bool schnorr_verify(const Group& grp, const GroupElement& statement, const GroupElement& base,
                    const SchnorrProof& proof, ByteSpan context) {
  Scalar e = schnorr_challenge(grp, context, statement, base, proof.nonce_commitment);
  return detail::schnorr_equation_holds(grp, statement, base, proof, e);
}

bool schnorr_verify(const Group& grp, const GroupElement& statement, const GroupElement& base,
                    ByteSpan encoded_proof, ByteSpan context) {
  auto proof = SchnorrProof::decode(grp, encoded_proof);
  if (!proof) return false;
  return schnorr_verify(grp, statement, base, *proof, context);
}

Bytes BitProof::encode(const Group& grp) const {
  ByteWriter w;
  w.raw(ca.bytes()).raw(cb.bytes());
  w.raw(grp.encode_scalar(f)).raw(grp.encode_scalar(za)).raw(grp.encode_scalar(zb));
  return w.take();
}

std::optional<BitProof> BitProof::decode(const Group& grp, ByteSpan bytes) {
  if (bytes.size() != encoded_len(grp)) return std::nullopt;
  const std::size_t el = grp.element_len();
  const std::size_t sl = grp.scalar_len();
  auto ca = grp.decode_element(bytes.subspan(0, el));
  auto cb = grp.decode_element(bytes.subspan(el, el));
  auto f = grp.decode_scalar(bytes.subspan(2 * el, sl));
  auto za = grp.decode_scalar(bytes.subspan(2 * el + sl, sl));
  auto zb = grp.decode_scalar(bytes.subspan(2 * el + 2 * sl, sl));
  if (!ca || !cb || !f || !za || !zb) return std::nullopt;
  return BitProof{*ca, *cb, *f, *za, *zb};
}

Scalar bit_challenge(const Group& grp, ByteSpan context, const Commitment& c, const GroupElement& ca,
                     const GroupElement& cb) {
  ByteWriter w;
  w.prefixed(context).prefixed(c.element.bytes()).prefixed(ca.bytes()).prefixed(cb.bytes());
  return grp.hash_to_scalar(kBitDomain, w.bytes());
}

BitProof bnizk_prove(const GroupParams& params, const Commitment& c, const Scalar& randomness, unsigned bit,
                     ByteSpan context, Rng& rng) {
  if (bit > 1) throw Error("bnizk_prove: witness bit must be 0 or 1");
  const Group& grp = params.grp();
  Scalar m = grp.scalar_from_u64(bit);
  Scalar a = grp.random_scalar(rng);
  Scalar s = grp.random_scalar(rng);
  Scalar t = grp.random_scalar(rng);
  GroupElement ca = commit(params, a, s).element;
  GroupElement cb = commit(params, grp.mul(a, m), t).element;
  Scalar e = bit_challenge(grp, context, c, ca, cb);
  Scalar f = grp.add(grp.mul(m, e), a);
  Scalar za = grp.add(grp.mul(randomness, e), s);
  Scalar zb = grp.add(grp.mul(randomness, grp.sub(e, f)), t);
  return {ca, cb, f, za, zb};
}

bool bnizk_verify(const GroupParams& params, const Commitment& c, const BitProof& proof, ByteSpan context) {
  Scalar e = bit_challenge(params.grp(), context, c, proof.ca, proof.cb);
  return detail::bit_equations_hold(params, c, proof, e);
}

bool bnizk_verify(const GroupParams& params, const Commitment& c, ByteSpan encoded_proof, ByteSpan context) {
  auto proof = BitProof::decode(params.grp(), encoded_proof);
  if (!proof) return false;
  return bnizk_verify(params, c, *proof, context);
}

}  // namespace zkhawk
