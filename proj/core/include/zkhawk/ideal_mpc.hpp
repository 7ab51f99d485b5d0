#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <memory>
#include <mutex>
#include <nlohmann/json.hpp>
#include <optional>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "zkhawk/blockchain.hpp"
#include "zkhawk/contract.hpp"
#include "zkhawk/messages.hpp"
#include "zkhawk/pedersen.hpp"
#include "zkhawk/rng.hpp"
#include "zkhawk/sigma.hpp"

namespace zkhawk {

// (c^(k,0), c^(k,1), s^(k,0), s^(k,1)) for one output bit.
struct BitSecret {
  Commitment c0;
  Commitment c1;
  Scalar s0;
  Scalar s1;

  friend bool operator==(const BitSecret&, const BitSecret&) = default;
};

// x = ($val, r, in, (c^(k,0), c^(k,1), s^(k,0), s^(k,1))_k)
struct MpcInput {
  CurrencyValue value = 0;
  Scalar r;
  std::string in;
  std::vector<BitSecret> bits;

  Bytes encode(const Group& grp) const;
  static MpcInput decode(const Group& grp, ByteSpan bytes);
  nlohmann::json to_json(const Group& grp) const;

  friend bool operator==(const MpcInput&, const MpcInput&) = default;
};

enum class AbortReason : std::uint8_t {
  kShapeMismatch = 0,
  kCoinMismatch,
  kCandidateMismatch,
  kOpeningMismatch,
  kInputOutOfRange,
  kContractFailed,
  kOutputOutOfRange,
};

std::string_view to_string(AbortReason reason);

// Distinguished ABORT output. `party` names the first offending input when
// blame applies.
struct MpcAbort {
  AbortReason reason = AbortReason::kContractFailed;
  std::optional<std::uint32_t> party;

  friend bool operator==(const MpcAbort&, const MpcAbort&) = default;
};

// y = (((c_j^(k))_k)_j, pi, out). Carries commitments, the balance proof and
// out only; no openings or randomness leave M.
struct MpcResult {
  std::vector<std::vector<Commitment>> selected;
  SchnorrProof proof;
  std::string out;

  friend bool operator==(const MpcResult&, const MpcResult&) = default;
};

struct MpcOutput {
  std::variant<MpcResult, MpcAbort> value;

  bool is_abort() const { return std::holds_alternative<MpcAbort>(value); }
  const MpcResult& result() const { return std::get<MpcResult>(value); }
  const MpcAbort& abort() const { return std::get<MpcAbort>(value); }

  // u8 kind (0 result, 1 abort) followed by the fields.
  Bytes encode(const Group& grp) const;
  static MpcOutput decode(const Group& grp, ByteSpan bytes);
  nlohmann::json to_json(const Group& grp) const;

  friend bool operator==(const MpcOutput&, const MpcOutput&) = default;
};

// Checks each party's secret input against public freeze data: the coin must
// open to ($val, r), each candidate must open to its bit, and the candidate
// pairs must equal the on-chain sets. Returns the first violation.
std::optional<MpcAbort> consistency_preamble(const GroupParams& params, std::size_t ell,
                                             const std::vector<PartyId>& parties, std::span<const MpcInput> inputs,
                                             const std::vector<FreezeRecord>& records);

// The MPC function: evaluate f, select per-bit candidates by the output
// value bits (the multiplexer), aggregate
//   r = sum_j (sum_k 2^k s_j^(k, val'_j[k]) - r_j)
// and prove knowledge of r with statement prod coin'_j / coin_j in base h,
// context = contract id.
MpcOutput eval_fhat(const GroupParams& params, const ContractFunction& f, const ContractId& id,
                    const std::vector<PartyId>& parties, std::size_t ell, const std::vector<FreezeRecord>& records,
                    std::span<const MpcInput> inputs, Rng& rng);

// f-hat bound to one contract instance and its public freeze records.
class MpcFunction {
 public:
  MpcFunction(GroupParams params, ContractFunction f, ContractId id, std::vector<PartyId> parties, std::size_t ell,
              std::vector<FreezeRecord> records);

  // SHA-256 over the contract id, code digest, ell, and the freeze records
  // in party order. Two parties hold the same function iff descriptors match.
  const Bytes& descriptor() const { return descriptor_; }
  const ContractId& contract() const { return id_; }
  const std::vector<PartyId>& parties() const { return parties_; }
  std::size_t ell() const { return ell_; }

  MpcOutput evaluate(std::span<const MpcInput> inputs, Rng& rng) const;

 private:
  GroupParams params_;
  ContractFunction f_;
  ContractId id_;
  std::vector<PartyId> parties_;
  std::size_t ell_;
  std::vector<FreezeRecord> records_;
  Bytes descriptor_;
};

// (input, f-hat, P, x)
struct InputMessage {
  std::shared_ptr<const MpcFunction> fhat;
  std::vector<PartyId> parties;
  MpcInput x;

  // lp("input") || lp(descriptor) || P || lp(x)
  Bytes encode(const Group& grp) const;
  nlohmann::json to_json(const Group& grp) const;
};

// (output, f-hat, P, y)
struct OutputMessage {
  Bytes fhat_descriptor;
  std::vector<PartyId> parties;
  MpcOutput y;

  // lp("output") || lp(descriptor) || P || lp(y)
  Bytes encode(const Group& grp) const;
  static OutputMessage decode(const Group& grp, ByteSpan bytes);
  nlohmann::json to_json(const Group& grp) const;
};

// The incorruptible entity M. Collects one input per (f-hat, P, party),
// replacing resubmissions; once every party in P has submitted, evaluates
// f-hat exactly once and sends (output, f-hat, P, y) to each party's private
// channel. submit() is thread-safe; y is fully computed before any delivery.
class IdealMpc {
 public:
  using Channel = std::function<void(const OutputMessage&)>;

  explicit IdealMpc(Rng rng) : rng_(std::move(rng)) {}

  void connect(const PartyId& party, Channel channel);

  // False if the message was dropped (sender not in P, or no function).
  bool submit(const PartyId& sender, InputMessage msg);

  std::vector<std::string> violations() const;
  std::size_t evaluations() const;

 private:
  using JobKey = std::pair<Bytes, std::vector<PartyId>>;

  mutable std::mutex mu_;
  Rng rng_;
  std::map<PartyId, Channel> channels_;
  std::map<JobKey, std::map<PartyId, InputMessage>> inputs_;
  std::vector<std::string> violations_;
  std::size_t evaluations_ = 0;
};

}  // namespace zkhawk
