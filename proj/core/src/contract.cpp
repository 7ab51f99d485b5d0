#include "zkhawk/contract.hpp"

#include <limits>

namespace zkhawk {

bool check_zero_sum(std::span<const CurrencyValue> inputs, std::span<const CurrencyValue> outputs) {
  if (inputs.size() != outputs.size()) {
    throw Error("check_zero_sum: " + std::to_string(inputs.size()) + " inputs vs " +
                std::to_string(outputs.size()) + " outputs");
  }
  // Sums of at most 2^32 values below 2^63 each fit in 128 bits.
  unsigned __int128 in = 0, out = 0;
  for (auto v : inputs) in += v;
  for (auto v : outputs) out += v;
  return in == out;
}

ContractFunction::ContractFunction(std::string name, std::uint32_t parameter, std::size_t arity, Evaluator fn)
    : name_(std::move(name)), parameter_(parameter), arity_(arity), fn_(std::move(fn)) {
  ByteWriter w;
  w.prefixed(name_).u32(parameter_).u32(kVersion);
  digest_ = sha256(w.bytes());
}

ContractResult ContractFunction::evaluate(std::span<const ContractInput> inputs) const {
  if (inputs.size() != arity_) return std::nullopt;
  for (const auto& in : inputs) {
    if (in.aux.size() > kMaxAuxBytes) return std::nullopt;
  }
  return fn_(inputs);
}

ContractFunction auction_contract(std::size_t bidders) {
  if (bidders < 1) throw Error("auction_contract: need at least one bidder");
  auto fn = [](std::span<const ContractInput> in) -> ContractResult {
    CurrencyValue highest = 0;
    std::size_t winner = 0;
    for (std::size_t i = 1; i < in.size(); ++i) {
      if (in[i].value > highest) {
        highest = in[i].value;
        winner = i;
      }
    }
    if (winner == 0) return std::nullopt;
    if (in[0].value > std::numeric_limits<CurrencyValue>::max() - highest) return std::nullopt;

    ContractOutput result;
    result.values.reserve(in.size());
    for (const auto& x : in) result.values.push_back(x.value);
    result.values[0] = in[0].value + highest;
    result.values[winner] = 0;
    result.out = std::to_string(winner);
    return result;
  };
  return ContractFunction("auction", static_cast<std::uint32_t>(bidders), bidders + 1, fn);
}

ContractFunction identity_contract(std::size_t n) {
  if (n < 1) throw Error("identity_contract: need at least one party");
  auto fn = [](std::span<const ContractInput> in) -> ContractResult {
    ContractOutput result;
    for (const auto& x : in) result.values.push_back(x.value);
    return result;
  };
  return ContractFunction("identity", static_cast<std::uint32_t>(n), n, fn);
}

ContractFunction bad_contract(std::size_t n) {
  if (n < 1) throw Error("bad_contract: need at least one party");
  auto fn = [](std::span<const ContractInput> in) -> ContractResult {
    ContractOutput result;
    for (const auto& x : in) result.values.push_back(x.value);
    result.values[0] += 1;
    return result;
  };
  return ContractFunction("bad", static_cast<std::uint32_t>(n), n, fn);
}

ContractFunction make_contract(const std::string& name, std::size_t parties) {
  if (name == "auction") {
    if (parties < 2) throw Error("auction needs a seller and at least one bidder");
    return auction_contract(parties - 1);
  }
  if (name == "identity") return identity_contract(parties);
  if (name == "bad") return bad_contract(parties);
  throw Error("unknown contract '" + name + "' (expected auction, identity or bad)");
}

}  // namespace zkhawk
