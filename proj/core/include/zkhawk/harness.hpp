#pragma once

#include <cstdint>
#include <map>
#include <nlohmann/json.hpp>
#include <optional>
#include <string>
#include <vector>

#include "zkhawk/blockchain.hpp"
#include "zkhawk/contract.hpp"
#include "zkhawk/ideal_mpc.hpp"
#include "zkhawk/transcript.hpp"

namespace zkhawk {

enum class Adversary : std::uint8_t {
  kNone = 0,
  kCorruptBitProof,   // party 1 sends a freeze with one tampered bit proof
  kSwapCandidate,     // the finalizer swaps one selected commitment for its sibling
  kBadContract,       // every party runs a contract that mints one unit for party 1
  kDuplicateFreeze,   // party 1 resends its accepted freeze
  kEarlyFinalize,     // party 1 posts a finalize before the compute phase
};

std::string_view to_string(Adversary a);
std::optional<Adversary> parse_adversary(std::string_view s);

class ConfigError : public Error {
 public:
  using Error::Error;
};

struct RunConfig {
  std::string contract = "identity";
  std::vector<CurrencyValue> values;
  std::vector<std::string> aux;  // empty, or one entry per party
  std::size_t ell = 16;
  std::string group = "production";
  std::uint64_t seed = 0;
  Adversary adversary = Adversary::kNone;
  std::size_t finalizer = 0;   // 0-based here, 1-based in JSON and on the CLI
  bool race_finalize = false;  // every party posts its finalize
  std::string transcript_path;
  std::string report_path;
  std::uint32_t phase_timeout_ms = 30000;

  std::size_t party_count() const { return values.size(); }

  // Throws ConfigError naming the first problem.
  void validate() const;

  // Unknown keys are rejected. Missing keys keep their defaults.
  static RunConfig from_json(const nlohmann::json& j);
  nlohmann::json to_json() const;
};

RunConfig load_config(const std::string& path);

struct Rejection {
  std::uint64_t seq = 0;
  std::string kind;
  std::string sender;
  Outcome outcome = Outcome::kAccepted;
};

struct RunReport {
  Phase final_phase = Phase::kFreeze;
  std::map<std::string, std::size_t> tally;  // "<kind>:<outcome>" -> count
  std::vector<Rejection> rejections;
  std::vector<CurrencyValue> inputs;
  std::vector<std::optional<CurrencyValue>> recovered;
  std::optional<std::vector<CurrencyValue>> expected;
  std::optional<MpcAbort> mpc_abort;
  std::optional<std::string> out;
  bool zero_sum = false;
  double duration_ms = 0;
  Bytes final_state_hash;
  std::vector<std::string> violations;

  bool invariants_hold() const { return violations.empty(); }
  nlohmann::json to_json() const;
};

struct RunResult {
  RunReport report;
  Transcript transcript;
};

// Runs freeze, compute through M, and finalize for one configuration,
// injecting the configured deviation. Throws ConfigError for an invalid
// configuration; protocol failures land in the report.
RunResult run_experiment(const RunConfig& cfg);

}  // namespace zkhawk
