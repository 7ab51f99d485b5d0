#include "zkhawk/blockchain.hpp"

#include <algorithm>

#include "zkhawk/sigma.hpp"

namespace zkhawk {

namespace {

constexpr std::array<std::string_view, 3> kPhaseNames = {"freeze", "compute", "finalized"};

constexpr std::array<std::string_view, 13> kOutcomeNames = {
    "accepted",          "malformed-message",     "sender-not-party",     "unknown-contract",
    "wrong-phase",       "party-mismatch",        "already-frozen",       "bad-shape",
    "duplicate-candidate", "bit-proof-invalid",   "missing-freeze-record", "candidate-not-member",
    "schnorr-failed",
};

const FreezeRecord* find_record(const std::vector<FreezeRecord>& records, const ContractId& id,
                                const PartyId& party) {
  for (const auto& r : records) {
    if (r.id == id && r.party == party) return &r;
  }
  return nullptr;
}

}  // namespace

std::string_view to_string(Phase phase) { return kPhaseNames.at(static_cast<std::size_t>(phase)); }

std::optional<Phase> parse_phase(std::string_view s) {
  for (std::size_t i = 0; i < kPhaseNames.size(); ++i) {
    if (kPhaseNames[i] == s) return static_cast<Phase>(i);
  }
  return std::nullopt;
}

std::string_view to_string(Outcome outcome) { return kOutcomeNames.at(static_cast<std::size_t>(outcome)); }

std::optional<Outcome> parse_outcome(std::string_view s) {
  for (std::size_t i = 0; i < kOutcomeNames.size(); ++i) {
    if (kOutcomeNames[i] == s) return static_cast<Outcome>(i);
  }
  return std::nullopt;
}

Bytes LedgerState::encode(const Group&) const {
  ByteWriter w;
  w.u32(static_cast<std::uint32_t>(contracts.size()));
  for (const auto& [id, rec] : contracts) {
    wire::write_contract_id(w, id);
    wire::write_parties(w, rec.parties);
    w.u32(static_cast<std::uint32_t>(rec.frozen.size()));
    for (const auto& p : rec.frozen) w.prefixed(p.name);
    w.u8(static_cast<std::uint8_t>(rec.phase));
  }
  w.u32(static_cast<std::uint32_t>(frozen_coins.size()));
  for (const auto& fc : frozen_coins) {
    wire::write_contract_id(w, fc.id);
    w.prefixed(fc.party.name);
    wire::write_element(w, fc.coin.element);
  }
  w.u32(static_cast<std::uint32_t>(freeze_records.size()));
  for (const auto& fr : freeze_records) {
    wire::write_contract_id(w, fr.id);
    w.prefixed(fr.party.name);
    wire::write_element(w, fr.coin.element);
    w.u32(static_cast<std::uint32_t>(fr.candidates.size()));
    for (const auto& pair : fr.candidates) {
      wire::write_element(w, pair[0].element);
      wire::write_element(w, pair[1].element);
    }
  }
  return w.take();
}

LedgerState LedgerState::decode(const Group& grp, ByteSpan bytes) {
  ByteReader r(bytes);
  LedgerState s;
  std::uint32_t n_contracts = r.u32();
  for (std::uint32_t i = 0; i < n_contracts; ++i) {
    ContractRecord rec;
    rec.id = wire::read_contract_id(r);
    rec.parties = wire::read_parties(r);
    std::uint32_t n_frozen = r.u32();
    for (std::uint32_t j = 0; j < n_frozen; ++j) rec.frozen.insert({r.prefixed_string(kMaxPartyNameBytes)});
    std::uint8_t phase = r.u8();
    if (phase > static_cast<std::uint8_t>(Phase::kFinalized)) throw DecodeError("bad phase byte");
    rec.phase = static_cast<Phase>(phase);
    s.contracts.emplace(rec.id, std::move(rec));
  }
  std::uint32_t n_coins = r.u32();
  for (std::uint32_t i = 0; i < n_coins; ++i) {
    FrozenCoinEntry fc;
    fc.id = wire::read_contract_id(r);
    fc.party = {r.prefixed_string(kMaxPartyNameBytes)};
    fc.coin = {wire::read_element(grp, r)};
    s.frozen_coins.push_back(std::move(fc));
  }
  std::uint32_t n_records = r.u32();
  for (std::uint32_t i = 0; i < n_records; ++i) {
    FreezeRecord fr;
    fr.id = wire::read_contract_id(r);
    fr.party = {r.prefixed_string(kMaxPartyNameBytes)};
    fr.coin = {wire::read_element(grp, r)};
    std::uint32_t ell = r.u32();
    if (ell > kMaxEll) throw DecodeError("bit width out of range");
    for (std::uint32_t k = 0; k < ell; ++k) {
      Commitment a{wire::read_element(grp, r)};
      Commitment b{wire::read_element(grp, r)};
      fr.candidates.push_back({a, b});
    }
    s.freeze_records.push_back(std::move(fr));
  }
  r.expect_done();
  return s;
}

std::size_t max_supported_ell(const Group& grp) {
  std::size_t bits = grp.order_bits();
  return bits < 3 ? 0 : std::min(kMaxEll, bits - 2);
}

bool fits_in_field(const Group& grp, std::size_t parties, std::size_t ell) {
  if (ell > max_supported_ell(grp)) return false;
  return BigUint(parties) * (BigUint(1) << ell) < grp.order();
}

FinalizeCheck check_finalize(const GroupParams& params, std::size_t ell, const ContractRecord& record,
                             const std::vector<FreezeRecord>& records, const FinalizeMessage& msg) {
  FinalizeCheck result;
  const std::size_t n = record.parties.size();
  if (msg.id != record.id || msg.selected.size() != n) {
    result.outcome = Outcome::kBadShape;
    return result;
  }
  for (const auto& row : msg.selected) {
    if (row.size() != ell) {
      result.outcome = Outcome::kBadShape;
      return result;
    }
  }

  const Group& grp = params.grp();
  GroupElement statement = grp.identity();
  for (std::size_t j = 0; j < n; ++j) {
    const FreezeRecord* fr = find_record(records, record.id, record.parties[j]);
    if (fr == nullptr || fr->candidates.size() != ell) {
      result.outcome = Outcome::kMissingFreezeRecord;
      return result;
    }
    for (std::size_t k = 0; k < ell; ++k) {
      const auto& pair = fr->candidates[k];
      const Commitment& chosen = msg.selected[j][k];
      if (chosen != pair[0] && chosen != pair[1]) {
        result.outcome = Outcome::kCandidateNotMember;
        return result;
      }
    }
    Commitment out_coin = recompose_bits(params, msg.selected[j], ell);
    statement = grp.mul(statement, grp.div(out_coin.element, fr->coin.element));
    result.output_coins.push_back(out_coin);
  }
  result.statement = statement;
  if (!schnorr_verify(grp, statement, params.h, ByteSpan(msg.proof), balance_proof_context(record.id))) {
    result.outcome = Outcome::kSchnorrFailed;
  }
  return result;
}

Blockchain::Blockchain(GroupParams params, std::size_t ell) : params_(std::move(params)), ell_(ell) {
  if (ell_ == 0 || ell_ > max_supported_ell(params_.grp())) {
    throw Error("blockchain: bit width " + std::to_string(ell_) + " unsupported by group " +
                std::string(params_.grp().name()));
  }
  std::lock_guard lock(mu_);
  emit_snapshot("init", Outcome::kAccepted);
}

Outcome Blockchain::handle_freeze(const FreezeMessage& msg, const PartyId& sender) {
  std::lock_guard lock(mu_);
  record_message(std::string(kFreezeTag), sender, msg.encode(params_.grp()));
  Outcome outcome = apply_freeze(msg, sender);
  emit_snapshot(std::string(kFreezeTag), outcome);
  return outcome;
}

Outcome Blockchain::handle_finalize(const FinalizeMessage& msg, const PartyId& sender) {
  std::lock_guard lock(mu_);
  record_message(std::string(kFinalizeTag), sender, msg.encode(params_.grp()));
  Outcome outcome = apply_finalize(msg);
  emit_snapshot(std::string(kFinalizeTag), outcome);
  return outcome;
}

Outcome Blockchain::handle_raw(ByteSpan bytes, const PartyId& sender) {
  std::string tag;
  try {
    tag = message_tag(bytes);
  } catch (const DecodeError&) {
    tag = "unknown";
  }
  std::lock_guard lock(mu_);
  record_message(tag, sender, Bytes(bytes.begin(), bytes.end()));
  Outcome outcome = Outcome::kMalformed;
  try {
    if (tag == kFreezeTag) {
      outcome = apply_freeze(FreezeMessage::decode(params_.grp(), bytes), sender);
    } else if (tag == kFinalizeTag) {
      outcome = apply_finalize(FinalizeMessage::decode(params_.grp(), bytes));
    }
  } catch (const DecodeError&) {
    outcome = Outcome::kMalformed;
  }
  emit_snapshot(tag, outcome);
  return outcome;
}

Outcome Blockchain::apply_freeze(const FreezeMessage& msg, const PartyId& sender) {
  const std::size_t sender_index = party_index(msg.parties, sender);
  if (sender_index == std::string::npos) return Outcome::kSenderNotParty;

  auto existing = state_.contracts.find(msg.id);
  ContractRecord record;
  if (existing == state_.contracts.end()) {
    std::set<PartyId> distinct(msg.parties.begin(), msg.parties.end());
    if (distinct.size() != msg.parties.size() || !fits_in_field(params_.grp(), msg.parties.size(), ell_)) {
      return Outcome::kBadShape;
    }
    record = ContractRecord{msg.id, msg.parties, {}, Phase::kFreeze};
  } else {
    record = existing->second;
  }
  if (record.phase != Phase::kFreeze) return Outcome::kWrongPhase;
  if (record.parties != msg.parties) return Outcome::kPartyMismatch;
  if (record.frozen.contains(sender)) return Outcome::kAlreadyFrozen;

  if (msg.pairs.size() != ell_) return Outcome::kBadShape;
  for (std::size_t k = 0; k < ell_; ++k) {
    const auto& pair = msg.pairs[k];
    if (pair[0].commitment == pair[1].commitment) return Outcome::kDuplicateCandidate;
    for (std::uint8_t slot = 0; slot < 2; ++slot) {
      Bytes ctx = bit_proof_context(msg.id, static_cast<std::uint32_t>(sender_index), static_cast<std::uint32_t>(k),
                                    slot);
      if (!bnizk_verify(params_, pair[slot].commitment, ByteSpan(pair[slot].proof), ctx)) {
        return Outcome::kBitProofInvalid;
      }
    }
  }

  FreezeRecord fr{msg.id, sender, msg.coin, {}};
  fr.candidates.reserve(ell_);
  for (const auto& pair : msg.pairs) {
    std::array<Commitment, 2> stored{pair[0].commitment, pair[1].commitment};
    std::sort(stored.begin(), stored.end());
    fr.candidates.push_back(stored);
  }
  record.frozen.insert(sender);
  if (record.frozen.size() == record.parties.size()) record.phase = Phase::kCompute;

  state_.contracts[msg.id] = std::move(record);
  state_.freeze_records.push_back(std::move(fr));
  state_.frozen_coins.push_back({msg.id, sender, msg.coin});
  return Outcome::kAccepted;
}

Outcome Blockchain::apply_finalize(const FinalizeMessage& msg) {
  auto it = state_.contracts.find(msg.id);
  if (it == state_.contracts.end()) return Outcome::kUnknownContract;
  ContractRecord& record = it->second;
  if (record.phase != Phase::kCompute) return Outcome::kWrongPhase;

  FinalizeCheck check = check_finalize(params_, ell_, record, state_.freeze_records, msg);
  if (check.outcome != Outcome::kAccepted) return check.outcome;

  for (std::size_t j = 0; j < record.parties.size(); ++j) {
    for (auto& fc : state_.frozen_coins) {
      if (fc.id == msg.id && fc.party == record.parties[j]) fc.coin = check.output_coins[j];
    }
  }
  record.phase = Phase::kFinalized;
  return Outcome::kAccepted;
}

void Blockchain::record_message(std::string kind, const PartyId& sender, Bytes bytes) {
  log_.push_back(ReceivedMessage{++handled_, std::move(kind), sender, std::move(bytes)});
}

void Blockchain::emit_snapshot(std::string trigger, Outcome outcome) {
  StateSnapshot snap;
  snap.seq = handled_;
  snap.trigger = std::move(trigger);
  snap.outcome = outcome;
  snap.state = state_.encode(params_.grp());
  snap.state_hash = sha256(snap.state);
  log_.push_back(snap);
  for (const auto& listener : listeners_) listener(snap);
  phase_changed_.notify_all();
}

std::vector<StateSnapshot> Blockchain::snapshot_log() const {
  std::lock_guard lock(mu_);
  std::vector<StateSnapshot> out;
  for (const auto& e : log_) {
    if (const auto* s = std::get_if<StateSnapshot>(&e)) out.push_back(*s);
  }
  return out;
}

std::vector<LogEntry> Blockchain::log() const {
  std::lock_guard lock(mu_);
  return log_;
}

LedgerState Blockchain::state() const {
  std::lock_guard lock(mu_);
  return state_;
}

Bytes Blockchain::state_hash() const {
  std::lock_guard lock(mu_);
  return state_.hash(params_.grp());
}

std::optional<ContractRecord> Blockchain::contract(const ContractId& id) const {
  std::lock_guard lock(mu_);
  auto it = state_.contracts.find(id);
  if (it == state_.contracts.end()) return std::nullopt;
  return it->second;
}

std::vector<FreezeRecord> Blockchain::freeze_records(const ContractId& id) const {
  std::lock_guard lock(mu_);
  std::vector<FreezeRecord> out;
  for (const auto& fr : state_.freeze_records) {
    if (fr.id == id) out.push_back(fr);
  }
  return out;
}

std::optional<FreezeRecord> Blockchain::freeze_record(const ContractId& id, const PartyId& party) const {
  std::lock_guard lock(mu_);
  const FreezeRecord* fr = find_record(state_.freeze_records, id, party);
  if (fr == nullptr) return std::nullopt;
  return *fr;
}

std::vector<FrozenCoinEntry> Blockchain::frozen_coins(const ContractId& id) const {
  std::lock_guard lock(mu_);
  std::vector<FrozenCoinEntry> out;
  for (const auto& fc : state_.frozen_coins) {
    if (fc.id == id) out.push_back(fc);
  }
  return out;
}

void Blockchain::subscribe(std::function<void(const StateSnapshot&)> listener) {
  std::lock_guard lock(mu_);
  listeners_.push_back(std::move(listener));
}

bool Blockchain::wait_for_phase(const ContractId& id, Phase phase, std::chrono::milliseconds timeout) const {
  std::unique_lock lock(mu_);
  return phase_changed_.wait_for(lock, timeout, [&] {
    auto it = state_.contracts.find(id);
    return it != state_.contracts.end() && it->second.phase >= phase;
  });
}

}  // namespace zkhawk
