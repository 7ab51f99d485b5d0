#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "zkhawk/bytes.hpp"

namespace zkhawk {

// Currency amount in [0, 2^ell). Bounds are enforced where ell is known
// (configuration, party, and the MPC function), not by the type.
using CurrencyValue = std::uint64_t;

inline constexpr std::size_t kMaxAuxBytes = 4096;

struct ContractInput {
  CurrencyValue value = 0;
  std::string aux;
};

struct ContractOutput {
  std::vector<CurrencyValue> values;
  std::string out;

  friend bool operator==(const ContractOutput&, const ContractOutput&) = default;
};

// nullopt is the failure outcome.
using ContractResult = std::optional<ContractOutput>;

// True iff the integer sums match. Throws Error on a length mismatch.
bool check_zero_sum(std::span<const CurrencyValue> inputs, std::span<const CurrencyValue> outputs);

// An n-ary smart-contract function together with a stable identity.
class ContractFunction {
 public:
  using Evaluator = std::function<ContractResult(std::span<const ContractInput>)>;

  ContractFunction(std::string name, std::uint32_t parameter, std::size_t arity, Evaluator fn);

  const std::string& name() const { return name_; }
  std::uint32_t parameter() const { return parameter_; }
  std::size_t arity() const { return arity_; }
  // SHA-256(lp(name) || u32 parameter || u32 version).
  const Bytes& code_digest() const { return digest_; }

  // Fails (nullopt) on wrong arity or an aux string over kMaxAuxBytes.
  ContractResult evaluate(std::span<const ContractInput> inputs) const;

  static constexpr std::uint32_t kVersion = 1;

 private:
  std::string name_;
  std::uint32_t parameter_;
  std::size_t arity_;
  Evaluator fn_;
  Bytes digest_;
};

// Sealed-bid auction over k bidders: party 0 is the seller, parties 1..k
// bid. Highest strictly-greater bid wins (earliest on ties); the seller
// gains the winning bid, the winner's balance is zeroed, losers keep theirs.
// out is the decimal winner index. All-zero bids fail.
ContractFunction auction_contract(std::size_t bidders);

// Returns the inputs unchanged with an empty out.
ContractFunction identity_contract(std::size_t n);

// Adds 1 to party 0's output. Violates zero-sum; negative tests only.
ContractFunction bad_contract(std::size_t n);

// Registry lookup: "auction" (n = bidders + 1), "identity", "bad". Throws
// Error for unknown names or unsupported party counts.
ContractFunction make_contract(const std::string& name, std::size_t parties);

}  // namespace zkhawk
