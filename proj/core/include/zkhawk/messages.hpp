#pragma once

#include <array>
#include <compare>
#include <cstdint>
#include <string>
#include <vector>

#include "zkhawk/bytes.hpp"
#include "zkhawk/contract.hpp"
#include "zkhawk/group.hpp"
#include "zkhawk/pedersen.hpp"

namespace zkhawk {

// Party pseudonym. Parties are addressed by position in the ordered list P.
struct PartyId {
  std::string name;

  friend bool operator==(const PartyId&, const PartyId&) = default;
  friend auto operator<=>(const PartyId&, const PartyId&) = default;
};

struct ContractId {
  std::array<std::uint8_t, 32> bytes{};

  std::string hex() const { return to_hex(bytes); }
  friend bool operator==(const ContractId&, const ContractId&) = default;
  friend auto operator<=>(const ContractId&, const ContractId&) = default;
};

inline constexpr std::size_t kMaxParties = 1024;
inline constexpr std::size_t kMaxEll = 63;
inline constexpr std::size_t kMaxPartyNameBytes = 256;

// id = SHA-256(lp(code_digest) || u32 n || lp(P_1) || ... || lp(P_n)).
ContractId contract_id(const ContractFunction& f, const std::vector<PartyId>& parties);

// Index of `party` in `parties`, or npos.
std::size_t party_index(const std::vector<PartyId>& parties, const PartyId& party);

// id || u32 party index || u32 bit index || u8 slot.
Bytes bit_proof_context(const ContractId& id, std::uint32_t party, std::uint32_t bit, std::uint8_t slot);
// The contract id alone.
Bytes balance_proof_context(const ContractId& id);

// One transmitted candidate: a bit commitment and its encoded bit proof. The
// proof stays encoded so a malformed proof fails verification instead of
// invalidating the whole message.
struct CandidateSlot {
  Commitment commitment;
  Bytes proof;

  friend bool operator==(const CandidateSlot&, const CandidateSlot&) = default;
};

// (freeze, id, P, coin, {((c^(k,b_k), pi), (c^(k,1-b_k), pi))}_k)
//
// Wire: lp("freeze") || id(32) || u32 n || lp(P_i)* || coin || u32 ell ||
//       (c || proof || c || proof)*
struct FreezeMessage {
  ContractId id;
  std::vector<PartyId> parties;
  Commitment coin;
  std::vector<std::array<CandidateSlot, 2>> pairs;

  Bytes encode(const Group& grp) const;
  // Throws DecodeError on structural problems or invalid group elements.
  static FreezeMessage decode(const Group& grp, ByteSpan bytes);

  friend bool operator==(const FreezeMessage&, const FreezeMessage&) = default;
};

// (finalize, id, ((c_j^(k))_k)_j, out, pi)
//
// Wire: lp("finalize") || id(32) || u32 n || u32 ell || c* (n*ell, party-major)
//       || lp(out) || lp(schnorr proof)
struct FinalizeMessage {
  ContractId id;
  std::vector<std::vector<Commitment>> selected;
  std::string out;
  Bytes proof;

  Bytes encode(const Group& grp) const;
  static FinalizeMessage decode(const Group& grp, ByteSpan bytes);

  friend bool operator==(const FinalizeMessage&, const FinalizeMessage&) = default;
};

inline constexpr std::string_view kFreezeTag = "freeze";
inline constexpr std::string_view kFinalizeTag = "finalize";

// Leading tag of an encoded message ("freeze", "finalize", ...). Throws
// DecodeError if no tag can be read.
std::string message_tag(ByteSpan bytes);

namespace wire {

void write_element(ByteWriter& w, const GroupElement& e);
GroupElement read_element(const Group& grp, ByteReader& r);
void write_scalar(ByteWriter& w, const Group& grp, const Scalar& s);
Scalar read_scalar(const Group& grp, ByteReader& r);
void write_contract_id(ByteWriter& w, const ContractId& id);
ContractId read_contract_id(ByteReader& r);
void write_parties(ByteWriter& w, const std::vector<PartyId>& parties);
std::vector<PartyId> read_parties(ByteReader& r);

}  // namespace wire

}  // namespace zkhawk
