#pragma once

#include <optional>
#include <string_view>

#include "zkhawk/group.hpp"
#include "zkhawk/pedersen.hpp"
#include "zkhawk/rng.hpp"

namespace zkhawk {

inline constexpr std::string_view kSchnorrDomain = "zkhawk/schnorr/v1";
inline constexpr std::string_view kBitDomain = "zkhawk/bit/v1";

// Non-interactive Schnorr proof of knowledge of r with statement = base^r.
// Wire form: nonce_commitment || response.
struct SchnorrProof {
  GroupElement nonce_commitment;
  Scalar response;

  Bytes encode(const Group& grp) const;
  static std::optional<SchnorrProof> decode(const Group& grp, ByteSpan bytes);
  static std::size_t encoded_len(const Group& grp) { return grp.element_len() + grp.scalar_len(); }

  friend bool operator==(const SchnorrProof&, const SchnorrProof&) = default;
};

// e = H("zkhawk/schnorr/v1", lp(context) || lp(statement) || lp(base) || lp(t)).
Scalar schnorr_challenge(const Group& grp, ByteSpan context, const GroupElement& statement,
                         const GroupElement& base, const GroupElement& nonce_commitment);

// Does not check statement == base^witness; a wrong witness simply yields a
// proof that fails verification.
SchnorrProof schnorr_prove(const Group& grp, const GroupElement& statement, const GroupElement& base,
                           const Scalar& witness, ByteSpan context, Rng& rng);

bool schnorr_verify(const Group& grp, const GroupElement& statement, const GroupElement& base,
                    const SchnorrProof& proof, ByteSpan context);
// Malformed encodings verify as false.
bool schnorr_verify(const Group& grp, const GroupElement& statement, const GroupElement& base,
                    ByteSpan encoded_proof, ByteSpan context);

// Proof that a Pedersen commitment c opens to m in {0, 1}.
//
// Prover: c_a = Com(a; s), c_b = Com(a*m; t); e from the oracle;
// f = m*e + a, z_a = r*e + s, z_b = r*(e - f) + t.
// Verifier: Com(f; z_a) == c^e * c_a and Com(0; z_b) == c^(e-f) * c_b.
// Wire form: c_a || c_b || f || z_a || z_b.
struct BitProof {
  GroupElement ca;
  GroupElement cb;
  Scalar f;
  Scalar za;
  Scalar zb;

  Bytes encode(const Group& grp) const;
  static std::optional<BitProof> decode(const Group& grp, ByteSpan bytes);
  static std::size_t encoded_len(const Group& grp) { return 2 * grp.element_len() + 3 * grp.scalar_len(); }

  friend bool operator==(const BitProof&, const BitProof&) = default;
};

// e = H("zkhawk/bit/v1", lp(context) || lp(c) || lp(c_a) || lp(c_b)).
Scalar bit_challenge(const Group& grp, ByteSpan context, const Commitment& c, const GroupElement& ca,
                     const GroupElement& cb);

// Throws Error if bit is not 0 or 1.
BitProof bnizk_prove(const GroupParams& params, const Commitment& c, const Scalar& randomness, unsigned bit,
                     ByteSpan context, Rng& rng);

bool bnizk_verify(const GroupParams& params, const Commitment& c, const BitProof& proof, ByteSpan context);
bool bnizk_verify(const GroupParams& params, const Commitment& c, ByteSpan encoded_proof, ByteSpan context);

namespace detail {

// Verification equations with an externally supplied challenge.
bool schnorr_equation_holds(const Group& grp, const GroupElement& statement, const GroupElement& base,
                            const SchnorrProof& proof, const Scalar& challenge);
bool bit_equations_hold(const GroupParams& params, const Commitment& c, const BitProof& proof,
                        const Scalar& challenge);

}  // namespace detail

}  // namespace zkhawk
