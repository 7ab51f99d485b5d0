#include "zkhawk/messages.hpp"

#include <algorithm>

#include "zkhawk/sigma.hpp"

namespace zkhawk {

namespace wire {

void write_element(ByteWriter& w, const GroupElement& e) { w.raw(e.bytes()); }

GroupElement read_element(const Group& grp, ByteReader& r) {
  auto e = grp.decode_element(r.raw(grp.element_len()));
  if (!e) throw DecodeError("invalid group element encoding");
  return *e;
}

void write_scalar(ByteWriter& w, const Group& grp, const Scalar& s) { w.raw(grp.encode_scalar(s)); }

Scalar read_scalar(const Group& grp, ByteReader& r) {
  auto s = grp.decode_scalar(r.raw(grp.scalar_len()));
  if (!s) throw DecodeError("non-canonical scalar encoding");
  return *s;
}

void write_contract_id(ByteWriter& w, const ContractId& id) { w.raw(id.bytes); }

ContractId read_contract_id(ByteReader& r) {
  ContractId id;
  auto b = r.raw(id.bytes.size());
  std::copy(b.begin(), b.end(), id.bytes.begin());
  return id;
}

void write_parties(ByteWriter& w, const std::vector<PartyId>& parties) {
  w.u32(static_cast<std::uint32_t>(parties.size()));
  for (const auto& p : parties) w.prefixed(p.name);
}

std::vector<PartyId> read_parties(ByteReader& r) {
  std::uint32_t n = r.u32();
  if (n == 0 || n > kMaxParties) throw DecodeError("party count out of range: " + std::to_string(n));
  std::vector<PartyId> parties;
  parties.reserve(n);
  for (std::uint32_t i = 0; i < n; ++i) parties.push_back({r.prefixed_string(kMaxPartyNameBytes)});
  return parties;
}

}  // namespace wire

ContractId contract_id(const ContractFunction& f, const std::vector<PartyId>& parties) {
  ByteWriter w;
  w.prefixed(f.code_digest());
  wire::write_parties(w, parties);
  Bytes digest = sha256(w.bytes());
  ContractId id;
  std::copy(digest.begin(), digest.end(), id.bytes.begin());
  return id;
}

std::size_t party_index(const std::vector<PartyId>& parties, const PartyId& party) {
  auto it = std::find(parties.begin(), parties.end(), party);
  return it == parties.end() ? std::string::npos : static_cast<std::size_t>(it - parties.begin());
}

Bytes bit_proof_context(const ContractId& id, std::uint32_t party, std::uint32_t bit, std::uint8_t slot) {
  ByteWriter w;
  w.raw(id.bytes).u32(party).u32(bit).u8(slot);
  return w.take();
}

Bytes balance_proof_context(const ContractId& id) { return Bytes(id.bytes.begin(), id.bytes.end()); }

Bytes FreezeMessage::encode(const Group& grp) const {
  ByteWriter w;
  w.prefixed(kFreezeTag);
  wire::write_contract_id(w, id);
  wire::write_parties(w, parties);
  wire::write_element(w, coin.element);
  w.u32(static_cast<std::uint32_t>(pairs.size()));
  const std::size_t proof_len = BitProof::encoded_len(grp);
  for (const auto& pair : pairs) {
    for (const auto& slot : pair) {
      if (slot.proof.size() != proof_len) throw Error("freeze message: bit proof has wrong encoded length");
      wire::write_element(w, slot.commitment.element);
      w.raw(slot.proof);
    }
  }
  return w.take();
}

FreezeMessage FreezeMessage::decode(const Group& grp, ByteSpan bytes) {
  ByteReader r(bytes);
  if (r.prefixed_string(16) != kFreezeTag) throw DecodeError("not a freeze message");
  FreezeMessage msg;
  msg.id = wire::read_contract_id(r);
  msg.parties = wire::read_parties(r);
  msg.coin = {wire::read_element(grp, r)};
  std::uint32_t ell = r.u32();
  if (ell == 0 || ell > kMaxEll) throw DecodeError("bit width out of range: " + std::to_string(ell));
  const std::size_t proof_len = BitProof::encoded_len(grp);
  msg.pairs.resize(ell);
  for (auto& pair : msg.pairs) {
    for (auto& slot : pair) {
      slot.commitment = {wire::read_element(grp, r)};
      auto p = r.raw(proof_len);
      slot.proof.assign(p.begin(), p.end());
    }
  }
  r.expect_done();
  return msg;
}

Bytes FinalizeMessage::encode(const Group&) const {
  ByteWriter w;
  w.prefixed(kFinalizeTag);
  wire::write_contract_id(w, id);
  const std::size_t ell = selected.empty() ? 0 : selected.front().size();
  w.u32(static_cast<std::uint32_t>(selected.size())).u32(static_cast<std::uint32_t>(ell));
  for (const auto& row : selected) {
    if (row.size() != ell) throw Error("finalize message: ragged selection");
    for (const auto& c : row) wire::write_element(w, c.element);
  }
  w.prefixed(out).prefixed(proof);
  return w.take();
}

FinalizeMessage FinalizeMessage::decode(const Group& grp, ByteSpan bytes) {
  ByteReader r(bytes);
  if (r.prefixed_string(16) != kFinalizeTag) throw DecodeError("not a finalize message");
  FinalizeMessage msg;
  msg.id = wire::read_contract_id(r);
  std::uint32_t n = r.u32();
  std::uint32_t ell = r.u32();
  if (n == 0 || n > kMaxParties) throw DecodeError("party count out of range: " + std::to_string(n));
  if (ell == 0 || ell > kMaxEll) throw DecodeError("bit width out of range: " + std::to_string(ell));
  msg.selected.assign(n, {});
  for (auto& row : msg.selected) {
    row.reserve(ell);
    for (std::uint32_t k = 0; k < ell; ++k) row.push_back({wire::read_element(grp, r)});
  }
  msg.out = r.prefixed_string(kMaxAuxBytes);
  msg.proof = r.prefixed(1024);
  r.expect_done();
  return msg;
}

std::string message_tag(ByteSpan bytes) {
  ByteReader r(bytes);
  return r.prefixed_string(16);
}

}  // namespace zkhawk
