#pragma once

#include <array>
#include <chrono>
#include <condition_variable>
#include <cstdint>
#include <functional>
#include <map>
#include <mutex>
#include <optional>
#include <set>
#include <string>
#include <variant>
#include <vector>

#include "zkhawk/group.hpp"
#include "zkhawk/messages.hpp"
#include "zkhawk/pedersen.hpp"

namespace zkhawk {

enum class Phase : std::uint8_t { kFreeze = 0, kCompute = 1, kFinalized = 2 };

std::string_view to_string(Phase phase);
std::optional<Phase> parse_phase(std::string_view s);

// Result of handling one message. Every rejection reason has its own code.
enum class Outcome : std::uint8_t {
  kAccepted = 0,
  kMalformed,
  kSenderNotParty,
  kUnknownContract,
  kWrongPhase,
  kPartyMismatch,
  kAlreadyFrozen,
  kBadShape,
  kDuplicateCandidate,
  kBitProofInvalid,
  kMissingFreezeRecord,
  kCandidateNotMember,
  kSchnorrFailed,
};

std::string_view to_string(Outcome outcome);
std::optional<Outcome> parse_outcome(std::string_view s);

// (id, P, P', phase). P is ordered; P' is the set of parties that froze.
struct ContractRecord {
  ContractId id;
  std::vector<PartyId> parties;
  std::set<PartyId> frozen;
  Phase phase = Phase::kFreeze;

  friend bool operator==(const ContractRecord&, const ContractRecord&) = default;
};

// (id, P, coin, {C^(k)}). Each candidate pair is stored sorted by encoding so
// storage order reveals nothing about which candidate commits to 0.
struct FreezeRecord {
  ContractId id;
  PartyId party;
  Commitment coin;
  std::vector<std::array<Commitment, 2>> candidates;

  friend bool operator==(const FreezeRecord&, const FreezeRecord&) = default;
};

struct FrozenCoinEntry {
  ContractId id;
  PartyId party;
  Commitment coin;

  friend bool operator==(const FrozenCoinEntry&, const FrozenCoinEntry&) = default;
};

// Everything the blockchain knows. Encodes canonically; the state hash is
// SHA-256 of that encoding.
struct LedgerState {
  std::map<ContractId, ContractRecord> contracts;
  std::vector<FrozenCoinEntry> frozen_coins;
  std::vector<FreezeRecord> freeze_records;

  Bytes encode(const Group& grp) const;
  static LedgerState decode(const Group& grp, ByteSpan bytes);
  Bytes hash(const Group& grp) const { return sha256(encode(grp)); }

  friend bool operator==(const LedgerState&, const LedgerState&) = default;
};

// Adversary view after a handled message (seq 0 is the state after init).
struct StateSnapshot {
  std::uint64_t seq = 0;
  std::string trigger;  // "init", "freeze", "finalize" or the unrecognised tag
  Outcome outcome = Outcome::kAccepted;
  Bytes state;
  Bytes state_hash;
};

// A message as received, before validation.
struct ReceivedMessage {
  std::uint64_t seq = 0;
  std::string kind;
  PartyId sender;
  Bytes bytes;
};

using LogEntry = std::variant<ReceivedMessage, StateSnapshot>;

// Verdict of the finalize checks shared by the blockchain and by parties.
struct FinalizeCheck {
  Outcome outcome = Outcome::kAccepted;
  std::vector<Commitment> output_coins;
  GroupElement statement;
};

// Candidate membership, per-party bit recomposition, the balance statement
// prod coin'_j / coin_j, and the Schnorr check in base h. The phase check
// stays with the caller.
FinalizeCheck check_finalize(const GroupParams& params, std::size_t ell, const ContractRecord& record,
                             const std::vector<FreezeRecord>& records, const FinalizeMessage& msg);

// Largest bit width the group supports: min(63, bits(q) - 2).
std::size_t max_supported_ell(const Group& grp);
// n * 2^ell < q.
bool fits_in_field(const Group& grp, std::size_t parties, std::size_t ell);

// Simulated blockchain running the freeze/finalize handlers. One writer at a
// time; every handled message appends the message and a full snapshot to the
// log. Rejections never touch ledger state.
class Blockchain {
 public:
  Blockchain(GroupParams params, std::size_t ell);

  Blockchain(const Blockchain&) = delete;
  Blockchain& operator=(const Blockchain&) = delete;

  Outcome handle_freeze(const FreezeMessage& msg, const PartyId& sender);
  Outcome handle_finalize(const FinalizeMessage& msg, const PartyId& sender);
  // Decodes by tag and dispatches; undecodable input is logged and rejected
  // as malformed.
  Outcome handle_raw(ByteSpan bytes, const PartyId& sender);

  std::vector<StateSnapshot> snapshot_log() const;
  std::vector<LogEntry> log() const;

  LedgerState state() const;
  Bytes state_hash() const;

  std::optional<ContractRecord> contract(const ContractId& id) const;
  std::vector<FreezeRecord> freeze_records(const ContractId& id) const;
  std::optional<FreezeRecord> freeze_record(const ContractId& id, const PartyId& party) const;
  std::vector<FrozenCoinEntry> frozen_coins(const ContractId& id) const;

  // Called after each snapshot, inside the writer's critical section.
  void subscribe(std::function<void(const StateSnapshot&)> listener);

  // Blocks until the contract reaches `phase` (or a later one) or the timeout
  // expires.
  bool wait_for_phase(const ContractId& id, Phase phase, std::chrono::milliseconds timeout) const;

  const GroupParams& params() const { return params_; }
  std::size_t ell() const { return ell_; }

 private:
  Outcome apply_freeze(const FreezeMessage& msg, const PartyId& sender);
  Outcome apply_finalize(const FinalizeMessage& msg);
  void record_message(std::string kind, const PartyId& sender, Bytes bytes);
  void emit_snapshot(std::string trigger, Outcome outcome);

  GroupParams params_;
  std::size_t ell_;

  mutable std::mutex mu_;
  mutable std::condition_variable phase_changed_;
  LedgerState state_;
  std::vector<LogEntry> log_;
  std::uint64_t handled_ = 0;
  std::vector<std::function<void(const StateSnapshot&)>> listeners_;
};

}  // namespace zkhawk
