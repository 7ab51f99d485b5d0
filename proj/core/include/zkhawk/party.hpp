#pragma once

#include <map>
#include <memory>
#include <nlohmann/json.hpp>
#include <optional>
#include <string>
#include <vector>

#include "zkhawk/blockchain.hpp"
#include "zkhawk/contract.hpp"
#include "zkhawk/ideal_mpc.hpp"
#include "zkhawk/messages.hpp"
#include "zkhawk/rng.hpp"

namespace zkhawk {

// A ($val, r) pair the party can open.
struct CoinOpening {
  CurrencyValue value = 0;
  Scalar r;

  friend bool operator==(const CoinOpening&, const CoinOpening&) = default;
};

// (id, f, P)
struct IdentifierRecord {
  ContractId id;
  ContractFunction f;
  std::vector<PartyId> parties;
};

// (id, $val, r, in, (c^(k,0), c^(k,1), s^(k,0), s^(k,1))_k). `first_slot`
// holds b_k, the bit committed by the first transmitted candidate.
struct SecretElems {
  ContractId id;
  CurrencyValue value = 0;
  Scalar r;
  std::string in;
  std::vector<BitSecret> bits;
  std::vector<std::uint8_t> first_slot;
};

// What U.Finalize hands back: the message to post and the party's own
// output-coin opening.
struct FinalizeOutcome {
  FinalizeMessage message;
  CoinOpening own;
};

// One user: the wrapper around create / freeze / prepare-compute / finalize.
// A Party is a sequential actor; distinct parties may run on distinct
// threads.
class Party {
 public:
  Party(PartyId id, GroupParams params, std::size_t ell, Rng rng);

  const PartyId& id() const { return id_; }
  std::size_t ell() const { return ell_; }

  // Computes and remembers id = contract_id(f, P). Throws if this party is
  // not in P.
  ContractId create(const ContractFunction& f, const std::vector<PartyId>& parties);

  // Builds the freeze message for a contract created earlier. Throws Error
  // for an unknown id, a value outside [0, 2^ell), or a second freeze.
  FreezeMessage freeze(const ContractId& id, const CoinOpening& opening, std::string in);

  // Wrapper entry point: draws r, records the input coin, creates and
  // freezes.
  FreezeMessage on_freeze(const ContractFunction& f, const std::vector<PartyId>& parties, CurrencyValue value,
                          std::string in);

  // Assembles this party's MPC input once the chain holds a freeze record
  // for every member of P. Throws Error("freeze incomplete") otherwise.
  InputMessage prepare_compute(const ContractId& id, const std::vector<FreezeRecord>& records);

  // Validates y with the same checks the blockchain applies, recovers the
  // party's own output opening and stores it. nullopt for ABORT, a y that
  // fails validation, or a y for a computation this party never started.
  std::optional<FinalizeOutcome> finalize(const OutputMessage& y, const std::vector<FreezeRecord>& records);

  // Encodes a finalize message for y without any checks.
  FinalizeMessage finalize_unchecked(const ContractId& id, const MpcResult& y) const;

  const std::vector<CoinOpening>& coins() const { return coins_; }
  const SecretElems* secrets(const ContractId& id) const;
  const IdentifierRecord* identifier(const ContractId& id) const;

  // Plaintext dump of identifiers, secrets and coins.
  nlohmann::json export_state() const;

 private:
  struct Computation {
    ContractId id;
    std::shared_ptr<const MpcFunction> fhat;
  };

  PartyId id_;
  GroupParams params_;
  std::size_t ell_;
  Rng rng_;
  std::map<ContractId, IdentifierRecord> identifiers_;
  std::map<ContractId, SecretElems> secrets_;
  std::map<Bytes, Computation> computations_;
  std::vector<CoinOpening> coins_;
};

}  // namespace zkhawk
