#include "zkhawk/ideal_mpc.hpp"

#include <algorithm>

namespace zkhawk {

namespace {

constexpr std::array<std::string_view, 7> kAbortNames = {
    "shape-mismatch",   "coin-mismatch",  "candidate-mismatch", "opening-mismatch",
    "input-out-of-range", "contract-failed", "output-out-of-range",
};

const FreezeRecord* record_for(const std::vector<FreezeRecord>& records, const ContractId& id, const PartyId& p) {
  for (const auto& r : records) {
    if (r.id == id && r.party == p) return &r;
  }
  return nullptr;
}

const FreezeRecord* record_for(const std::vector<FreezeRecord>& records, const PartyId& p) {
  for (const auto& r : records) {
    if (r.party == p) return &r;
  }
  return nullptr;
}

MpcAbort blame(AbortReason reason, std::size_t j) { return {reason, static_cast<std::uint32_t>(j)}; }

}  // namespace

std::string_view to_string(AbortReason reason) { return kAbortNames.at(static_cast<std::size_t>(reason)); }

Bytes MpcInput::encode(const Group& grp) const {
  ByteWriter w;
  w.u64(value);
  wire::write_scalar(w, grp, r);
  w.prefixed(in);
  w.u32(static_cast<std::uint32_t>(bits.size()));
  for (const auto& b : bits) {
    wire::write_element(w, b.c0.element);
    wire::write_element(w, b.c1.element);
    wire::write_scalar(w, grp, b.s0);
    wire::write_scalar(w, grp, b.s1);
  }
  return w.take();
}

MpcInput MpcInput::decode(const Group& grp, ByteSpan bytes) {
  ByteReader rd(bytes);
  MpcInput x;
  x.value = rd.u64();
  x.r = wire::read_scalar(grp, rd);
  x.in = rd.prefixed_string(kMaxAuxBytes);
  std::uint32_t ell = rd.u32();
  if (ell > kMaxEll) throw DecodeError("bit width out of range");
  x.bits.resize(ell);
  for (auto& b : x.bits) {
    b.c0 = {wire::read_element(grp, rd)};
    b.c1 = {wire::read_element(grp, rd)};
    b.s0 = wire::read_scalar(grp, rd);
    b.s1 = wire::read_scalar(grp, rd);
  }
  rd.expect_done();
  return x;
}

nlohmann::json MpcInput::to_json(const Group& grp) const {
  nlohmann::json bits_json = nlohmann::json::array();
  for (const auto& b : bits) {
    bits_json.push_back({{"c0", b.c0.element.hex()},
                         {"c1", b.c1.element.hex()},
                         {"s0", to_hex(grp.encode_scalar(b.s0))},
                         {"s1", to_hex(grp.encode_scalar(b.s1))}});
  }
  return {{"value", value}, {"r", to_hex(grp.encode_scalar(r))}, {"in", to_hex(as_bytes(in))}, {"bits", bits_json}};
}

Bytes MpcOutput::encode(const Group& grp) const {
  ByteWriter w;
  if (is_abort()) {
    const auto& a = abort();
    w.u8(1).u8(static_cast<std::uint8_t>(a.reason)).u8(a.party ? 1 : 0).u32(a.party.value_or(0));
    return w.take();
  }
  const auto& res = result();
  const std::size_t ell = res.selected.empty() ? 0 : res.selected.front().size();
  w.u8(0).u32(static_cast<std::uint32_t>(res.selected.size())).u32(static_cast<std::uint32_t>(ell));
  for (const auto& row : res.selected) {
    if (row.size() != ell) throw Error("mpc output: ragged selection");
    for (const auto& c : row) wire::write_element(w, c.element);
  }
  w.raw(res.proof.encode(grp)).prefixed(res.out);
  return w.take();
}

MpcOutput MpcOutput::decode(const Group& grp, ByteSpan bytes) {
  ByteReader r(bytes);
  std::uint8_t kind = r.u8();
  if (kind == 1) {
    MpcAbort a;
    std::uint8_t reason = r.u8();
    if (reason >= kAbortNames.size()) throw DecodeError("unknown abort reason");
    a.reason = static_cast<AbortReason>(reason);
    std::uint8_t has_party = r.u8();
    std::uint32_t party = r.u32();
    if (has_party > 1) throw DecodeError("bad blame flag");
    if (has_party == 1) a.party = party;
    r.expect_done();
    return {a};
  }
  if (kind != 0) throw DecodeError("unknown mpc output kind");
  MpcResult res;
  std::uint32_t n = r.u32();
  std::uint32_t ell = r.u32();
  if (n > kMaxParties || ell > kMaxEll) throw DecodeError("mpc output dimensions out of range");
  res.selected.assign(n, {});
  for (auto& row : res.selected) {
    for (std::uint32_t k = 0; k < ell; ++k) row.push_back({wire::read_element(grp, r)});
  }
  auto proof = SchnorrProof::decode(grp, r.raw(SchnorrProof::encoded_len(grp)));
  if (!proof) throw DecodeError("invalid balance proof encoding");
  res.proof = *proof;
  res.out = r.prefixed_string(kMaxAuxBytes);
  r.expect_done();
  return {res};
}

nlohmann::json MpcOutput::to_json(const Group& grp) const {
  if (is_abort()) {
    nlohmann::json j = {{"kind", "abort"}, {"reason", to_string(abort().reason)}};
    if (abort().party) j["party"] = *abort().party;
    return j;
  }
  nlohmann::json rows = nlohmann::json::array();
  for (const auto& row : result().selected) {
    nlohmann::json cs = nlohmann::json::array();
    for (const auto& c : row) cs.push_back(c.element.hex());
    rows.push_back(cs);
  }
  return {{"kind", "result"},
          {"selected", rows},
          {"proof", to_hex(result().proof.encode(grp))},
          {"out", to_hex(as_bytes(result().out))}};
}

std::optional<MpcAbort> consistency_preamble(const GroupParams& params, std::size_t ell,
                                             const std::vector<PartyId>& parties, std::span<const MpcInput> inputs,
                                             const std::vector<FreezeRecord>& records) {
  if (inputs.size() != parties.size()) return MpcAbort{AbortReason::kShapeMismatch, std::nullopt};
  const Group& grp = params.grp();
  for (std::size_t j = 0; j < parties.size(); ++j) {
    const MpcInput& x = inputs[j];
    const FreezeRecord* fr = record_for(records, parties[j]);
    if (fr == nullptr || x.bits.size() != ell || fr->candidates.size() != ell) {
      return blame(AbortReason::kShapeMismatch, j);
    }
    if (ell < 64 && x.value >= (std::uint64_t{1} << ell)) return blame(AbortReason::kInputOutOfRange, j);
    if (!verify_opening(params, fr->coin, {grp.scalar_from_u64(x.value), x.r})) {
      return blame(AbortReason::kCoinMismatch, j);
    }
    for (std::size_t k = 0; k < ell; ++k) {
      const BitSecret& b = x.bits[k];
      std::array<Commitment, 2> submitted{b.c0, b.c1};
      std::sort(submitted.begin(), submitted.end());
      if (submitted != fr->candidates[k]) return blame(AbortReason::kCandidateMismatch, j);
      if (!verify_opening(params, b.c0, {grp.scalar_from_u64(0), b.s0}) ||
          !verify_opening(params, b.c1, {grp.scalar_from_u64(1), b.s1})) {
        return blame(AbortReason::kOpeningMismatch, j);
      }
    }
  }
  return std::nullopt;
}

MpcOutput eval_fhat(const GroupParams& params, const ContractFunction& f, const ContractId& id,
                    const std::vector<PartyId>& parties, std::size_t ell, const std::vector<FreezeRecord>& records,
                    std::span<const MpcInput> inputs, Rng& rng) {
  if (auto abort = consistency_preamble(params, ell, parties, inputs, records)) return {*abort};

  std::vector<ContractInput> contract_inputs;
  contract_inputs.reserve(inputs.size());
  for (const auto& x : inputs) contract_inputs.push_back({x.value, x.in});
  ContractResult evaluated = f.evaluate(contract_inputs);
  if (!evaluated || evaluated->values.size() != parties.size()) {
    return {MpcAbort{AbortReason::kContractFailed, std::nullopt}};
  }
  const auto& values = evaluated->values;
  for (std::size_t j = 0; j < values.size(); ++j) {
    if (ell < 64 && values[j] >= (std::uint64_t{1} << ell)) return {blame(AbortReason::kOutputOutOfRange, j)};
  }

  const Group& grp = params.grp();
  MpcResult res;
  res.selected.resize(parties.size());
  Scalar witness = grp.scalar_from_u64(0);
  GroupElement statement = grp.identity();
  for (std::size_t j = 0; j < parties.size(); ++j) {
    const MpcInput& x = inputs[j];
    Scalar out_randomness = grp.scalar_from_u64(0);
    Scalar power = grp.scalar_from_u64(1);
    const Scalar two = grp.scalar_from_u64(2);
    for (std::size_t k = 0; k < ell; ++k) {
      const bool bit = ((values[j] >> k) & 1u) != 0;
      const BitSecret& b = x.bits[k];
      res.selected[j].push_back(bit ? b.c1 : b.c0);
      out_randomness = grp.add(out_randomness, grp.mul(power, bit ? b.s1 : b.s0));
      power = grp.mul(power, two);
    }
    witness = grp.add(witness, grp.sub(out_randomness, x.r));
    const FreezeRecord* fr = record_for(records, id, parties[j]);
    Commitment out_coin = recompose_bits(params, res.selected[j], ell);
    statement = grp.mul(statement, grp.div(out_coin.element, fr->coin.element));
  }
  res.proof = schnorr_prove(grp, statement, params.h, witness, balance_proof_context(id), rng);
  res.out = evaluated->out;
  return {res};
}

MpcFunction::MpcFunction(GroupParams params, ContractFunction f, ContractId id, std::vector<PartyId> parties,
                         std::size_t ell, std::vector<FreezeRecord> records)
    : params_(std::move(params)),
      f_(std::move(f)),
      id_(id),
      parties_(std::move(parties)),
      ell_(ell),
      records_(std::move(records)) {
  ByteWriter w;
  w.prefixed(std::string_view("zkhawk/fhat/v1"));
  wire::write_contract_id(w, id_);
  w.prefixed(f_.code_digest()).u32(static_cast<std::uint32_t>(ell_));
  wire::write_parties(w, parties_);
  for (const auto& p : parties_) {
    const FreezeRecord* fr = record_for(records_, id_, p);
    if (fr == nullptr) throw Error("mpc function: no freeze record for party " + p.name);
    wire::write_element(w, fr->coin.element);
    for (const auto& pair : fr->candidates) {
      wire::write_element(w, pair[0].element);
      wire::write_element(w, pair[1].element);
    }
  }
  descriptor_ = sha256(w.bytes());
}

MpcOutput MpcFunction::evaluate(std::span<const MpcInput> inputs, Rng& rng) const {
  return eval_fhat(params_, f_, id_, parties_, ell_, records_, inputs, rng);
}

Bytes InputMessage::encode(const Group& grp) const {
  ByteWriter w;
  w.prefixed(std::string_view("input")).prefixed(fhat ? fhat->descriptor() : Bytes{});
  wire::write_parties(w, parties);
  w.prefixed(x.encode(grp));
  return w.take();
}

nlohmann::json InputMessage::to_json(const Group& grp) const {
  nlohmann::json ps = nlohmann::json::array();
  for (const auto& p : parties) ps.push_back(p.name);
  return {{"type", "input"},
          {"fhat", fhat ? to_hex(fhat->descriptor()) : std::string()},
          {"parties", ps},
          {"x", x.to_json(grp)}};
}

Bytes OutputMessage::encode(const Group& grp) const {
  ByteWriter w;
  w.prefixed(std::string_view("output")).prefixed(fhat_descriptor);
  wire::write_parties(w, parties);
  w.prefixed(y.encode(grp));
  return w.take();
}

OutputMessage OutputMessage::decode(const Group& grp, ByteSpan bytes) {
  ByteReader r(bytes);
  if (r.prefixed_string(16) != "output") throw DecodeError("not an output message");
  OutputMessage msg;
  msg.fhat_descriptor = r.prefixed(64);
  msg.parties = wire::read_parties(r);
  msg.y = MpcOutput::decode(grp, r.prefixed());
  r.expect_done();
  return msg;
}

nlohmann::json OutputMessage::to_json(const Group& grp) const {
  nlohmann::json ps = nlohmann::json::array();
  for (const auto& p : parties) ps.push_back(p.name);
  return {{"type", "output"}, {"fhat", to_hex(fhat_descriptor)}, {"parties", ps}, {"y", y.to_json(grp)}};
}

void IdealMpc::connect(const PartyId& party, Channel channel) {
  std::lock_guard lock(mu_);
  channels_[party] = std::move(channel);
}

bool IdealMpc::submit(const PartyId& sender, InputMessage msg) {
  std::vector<std::pair<Channel, PartyId>> recipients;
  OutputMessage output;
  {
    std::lock_guard lock(mu_);
    if (!msg.fhat) {
      violations_.push_back("input from " + sender.name + " names no function");
      return false;
    }
    if (party_index(msg.parties, sender) == std::string::npos) {
      violations_.push_back("input from " + sender.name + " who is not in P");
      return false;
    }
    JobKey key{msg.fhat->descriptor(), msg.parties};
    auto& pending = inputs_[key];
    pending.insert_or_assign(sender, std::move(msg));
    if (pending.size() != key.second.size()) return true;

    std::vector<MpcInput> xs;
    xs.reserve(key.second.size());
    for (const auto& p : key.second) xs.push_back(pending.at(p).x);
    auto fhat = pending.at(key.second.front()).fhat;
    output.fhat_descriptor = key.first;
    output.parties = key.second;
    output.y = fhat->evaluate(xs, rng_);
    ++evaluations_;
    inputs_.erase(key);

    for (const auto& p : output.parties) {
      auto it = channels_.find(p);
      if (it != channels_.end()) recipients.emplace_back(it->second, p);
    }
  }
  for (auto& [channel, party] : recipients) channel(output);
  return true;
}

std::vector<std::string> IdealMpc::violations() const {
  std::lock_guard lock(mu_);
  return violations_;
}

std::size_t IdealMpc::evaluations() const {
  std::lock_guard lock(mu_);
  return evaluations_;
}

}  // namespace zkhawk
