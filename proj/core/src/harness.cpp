#include "zkhawk/harness.hpp"

#include <chrono>
#include <exception>
#include <fstream>
#include <mutex>
#include <thread>

#include "zkhawk/party.hpp"
#include "zkhawk/sigma.hpp"

namespace zkhawk {

namespace {

using nlohmann::json;

constexpr std::array<std::string_view, 6> kAdversaryNames = {
    "none", "corrupt-bit-proof", "swap-candidate", "bad-contract", "duplicate-freeze", "early-finalize",
};

// Runs fn(i) for i in [0, n) on one thread each and rethrows the first
// failure after all threads have joined.
template <typename Fn>
void parallel_for(std::size_t n, Fn fn) {
  std::vector<std::exception_ptr> errors(n);
  {
    std::vector<std::jthread> workers;
    workers.reserve(n);
    for (std::size_t i = 0; i < n; ++i) {
      workers.emplace_back([&, i] {
        try {
          fn(i);
        } catch (...) {
          errors[i] = std::current_exception();
        }
      });
    }
  }
  for (auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
}

ContractFunction contract_for(const RunConfig& cfg) {
  if (cfg.adversary == Adversary::kBadContract) return bad_contract(cfg.party_count());
  return make_contract(cfg.contract, cfg.party_count());
}

std::string aux_for(const RunConfig& cfg, std::size_t i) { return cfg.aux.empty() ? std::string() : cfg.aux[i]; }

void corrupt_one_bit_proof(const Group& grp, FreezeMessage& msg, Rng& rng) {
  const std::size_t k = rng.next_u64() % msg.pairs.size();
  const std::size_t slot = rng.next_bit() ? 1 : 0;
  auto& cand = msg.pairs[k][slot];
  auto proof = BitProof::decode(grp, cand.proof);
  if (!proof) throw Error("corrupt-bit-proof: honest proof failed to decode");
  proof->za = grp.add(proof->za, grp.scalar_from_u64(1));
  cand.proof = proof->encode(grp);
}

FinalizeMessage premature_finalize(const GroupParams& params, const FreezeMessage& own, std::size_t n, Rng& rng) {
  const Group& grp = params.grp();
  FinalizeMessage msg;
  msg.id = own.id;
  std::vector<Commitment> row;
  for (const auto& pair : own.pairs) row.push_back(pair[0].commitment);
  msg.selected.assign(n, row);
  msg.proof = schnorr_prove(grp, params.g, params.h, grp.random_scalar(rng), balance_proof_context(own.id), rng)
                  .encode(grp);
  return msg;
}

void swap_one_candidate(FinalizeMessage& msg, const FreezeRecord& record, Rng& rng) {
  const std::size_t k = rng.next_u64() % record.candidates.size();
  const auto& pair = record.candidates[k];
  Commitment& chosen = msg.selected[0][k];
  chosen = chosen == pair[0] ? pair[1] : pair[0];
}

struct ExpectedRejection {
  std::string kind;
  Outcome outcome;
};

void summarize_log(const std::vector<LogEntry>& log, RunReport& report) {
  std::optional<Bytes> previous_hash;
  const ReceivedMessage* pending = nullptr;
  for (const auto& entry : log) {
    if (const auto* m = std::get_if<ReceivedMessage>(&entry)) {
      pending = m;
      continue;
    }
    const auto& snap = std::get<StateSnapshot>(entry);
    if (pending != nullptr) {
      report.tally[pending->kind + ":" + std::string(to_string(snap.outcome))]++;
      if (snap.outcome != Outcome::kAccepted) {
        report.rejections.push_back({snap.seq, pending->kind, pending->sender.name, snap.outcome});
        if (previous_hash && *previous_hash != snap.state_hash) {
          report.violations.push_back("rejected message " + std::to_string(snap.seq) + " changed ledger state");
        }
      }
      pending = nullptr;
    }
    previous_hash = snap.state_hash;
  }
}

std::vector<ExpectedRejection> expected_rejections(const RunConfig& cfg, bool expect_finalize) {
  std::vector<ExpectedRejection> out;
  switch (cfg.adversary) {
    case Adversary::kCorruptBitProof:
      return {{"freeze", Outcome::kBitProofInvalid}};
    case Adversary::kSwapCandidate:
    case Adversary::kBadContract:
      return {{"finalize", Outcome::kSchnorrFailed}};
    case Adversary::kDuplicateFreeze:
      out.push_back({"freeze", Outcome::kAlreadyFrozen});
      break;
    case Adversary::kEarlyFinalize:
      out.push_back({"finalize", Outcome::kWrongPhase});
      break;
    case Adversary::kNone:
      break;
  }
  if (expect_finalize && cfg.race_finalize) {
    for (std::size_t i = 1; i < cfg.party_count(); ++i) out.push_back({"finalize", Outcome::kWrongPhase});
  }
  return out;
}

void check_invariants(const RunConfig& cfg, RunReport& r) {
  auto fail = [&](std::string what) { r.violations.push_back(std::move(what)); };

  const bool honest_outcome = cfg.adversary == Adversary::kNone || cfg.adversary == Adversary::kDuplicateFreeze ||
                              cfg.adversary == Adversary::kEarlyFinalize;
  const bool expect_finalize = honest_outcome && r.expected.has_value();

  auto want = expected_rejections(cfg, expect_finalize);
  bool rejections_match = want.size() == r.rejections.size();
  for (std::size_t i = 0; rejections_match && i < want.size(); ++i) {
    rejections_match = want[i].kind == r.rejections[i].kind && want[i].outcome == r.rejections[i].outcome;
  }
  if (!rejections_match) {
    std::string got;
    for (const auto& rej : r.rejections) got += " " + rej.kind + ":" + std::string(to_string(rej.outcome));
    fail("unexpected rejections:" + (got.empty() ? std::string(" none") : got));
  }

  Phase want_phase = Phase::kCompute;
  if (cfg.adversary == Adversary::kCorruptBitProof) want_phase = Phase::kFreeze;
  if (expect_finalize) want_phase = Phase::kFinalized;
  if (r.final_phase != want_phase) {
    fail("final phase " + std::string(to_string(r.final_phase)) + ", expected " + std::string(to_string(want_phase)));
  }

  if (!honest_outcome) return;
  if (!r.expected) {
    if (!r.mpc_abort) fail("contract output invalid but M did not abort");
    return;
  }
  if (r.mpc_abort) fail("M aborted: " + std::string(to_string(r.mpc_abort->reason)));
  for (std::size_t j = 0; j < r.recovered.size(); ++j) {
    if (r.recovered[j] != (*r.expected)[j]) fail("party " + std::to_string(j + 1) + " recovered the wrong value");
  }
  if (!r.zero_sum) fail("sum of recovered outputs differs from sum of inputs");
}

}  // namespace

std::string_view to_string(Adversary a) { return kAdversaryNames.at(static_cast<std::size_t>(a)); }

std::optional<Adversary> parse_adversary(std::string_view s) {
  for (std::size_t i = 0; i < kAdversaryNames.size(); ++i) {
    if (kAdversaryNames[i] == s) return static_cast<Adversary>(i);
  }
  return std::nullopt;
}

void RunConfig::validate() const {
  GroupParams params;
  try {
    params = GroupParams::by_name(group);
  } catch (const Error& e) {
    throw ConfigError(e.what());
  }
  const std::size_t n = party_count();
  if (n == 0) throw ConfigError("no party values given");
  if (n > kMaxParties) throw ConfigError("too many parties: " + std::to_string(n));
  const std::size_t max_ell = max_supported_ell(params.grp());
  if (ell == 0 || ell > max_ell) {
    throw ConfigError("ell must be in [1, " + std::to_string(max_ell) + "] for group " + group);
  }
  if (!fits_in_field(params.grp(), n, ell)) throw ConfigError("n * 2^ell must be below the group order");
  for (std::size_t i = 0; i < n; ++i) {
    if (values[i] >= (std::uint64_t{1} << ell)) {
      throw ConfigError("value of party " + std::to_string(i + 1) + " is not below 2^ell");
    }
  }
  if (!aux.empty() && aux.size() != n) throw ConfigError("aux must be empty or have one entry per party");
  for (const auto& a : aux) {
    if (a.size() > kMaxAuxBytes) throw ConfigError("aux input longer than " + std::to_string(kMaxAuxBytes));
  }
  try {
    (void)make_contract(contract, n);
  } catch (const Error& e) {
    throw ConfigError(e.what());
  }
  if (finalizer >= n) throw ConfigError("finalizer index out of range");
  if (adversary == Adversary::kBadContract && values[0] + 1 >= (std::uint64_t{1} << ell)) {
    throw ConfigError("bad-contract needs party 1's value + 1 below 2^ell");
  }
  if (phase_timeout_ms == 0) throw ConfigError("phase timeout must be positive");
}

RunConfig RunConfig::from_json(const json& j) {
  if (!j.is_object()) throw ConfigError("config must be a JSON object");
  RunConfig cfg;
  try {
    for (const auto& [key, v] : j.items()) {
      if (key == "contract") {
        cfg.contract = v.get<std::string>();
      } else if (key == "values") {
        cfg.values = v.get<std::vector<CurrencyValue>>();
      } else if (key == "aux") {
        cfg.aux = v.get<std::vector<std::string>>();
      } else if (key == "ell") {
        cfg.ell = v.get<std::size_t>();
      } else if (key == "group") {
        cfg.group = v.get<std::string>();
      } else if (key == "seed") {
        cfg.seed = v.get<std::uint64_t>();
      } else if (key == "adversary") {
        auto a = parse_adversary(v.get<std::string>());
        if (!a) throw ConfigError("unknown adversary mode: " + v.get<std::string>());
        cfg.adversary = *a;
      } else if (key == "finalizer") {
        auto one_based = v.get<std::size_t>();
        if (one_based == 0) throw ConfigError("finalizer is 1-based");
        cfg.finalizer = one_based - 1;
      } else if (key == "race_finalize") {
        cfg.race_finalize = v.get<bool>();
      } else if (key == "transcript") {
        cfg.transcript_path = v.get<std::string>();
      } else if (key == "report") {
        cfg.report_path = v.get<std::string>();
      } else if (key == "phase_timeout_ms") {
        cfg.phase_timeout_ms = v.get<std::uint32_t>();
      } else {
        throw ConfigError("unknown config key: " + key);
      }
    }
  } catch (const json::exception& e) {
    throw ConfigError(std::string("config: ") + e.what());
  }
  return cfg;
}

json RunConfig::to_json() const {
  return {{"contract", contract},
          {"values", values},
          {"aux", aux},
          {"ell", ell},
          {"group", group},
          {"seed", seed},
          {"adversary", to_string(adversary)},
          {"finalizer", finalizer + 1},
          {"race_finalize", race_finalize},
          {"transcript", transcript_path},
          {"report", report_path},
          {"phase_timeout_ms", phase_timeout_ms}};
}

RunConfig load_config(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw ConfigError("cannot open config " + path);
  json j = json::parse(f, nullptr, false);
  if (j.is_discarded()) throw ConfigError("config " + path + " is not valid JSON");
  return RunConfig::from_json(j);
}

json RunReport::to_json() const {
  json rej = json::array();
  for (const auto& r : rejections) {
    rej.push_back({{"seq", r.seq}, {"kind", r.kind}, {"sender", r.sender}, {"reason", to_string(r.outcome)}});
  }
  json rec = json::array();
  for (const auto& v : recovered) rec.push_back(v ? json(*v) : json(nullptr));
  json j = {{"final_phase", to_string(final_phase)},
            {"tally", tally},
            {"rejections", rej},
            {"inputs", inputs},
            {"recovered", rec},
            {"expected", expected ? json(*expected) : json(nullptr)},
            {"zero_sum", zero_sum},
            {"out", out ? json(*out) : json(nullptr)},
            {"duration_ms", duration_ms},
            {"final_state_hash", to_hex(final_state_hash)},
            {"invariants_hold", invariants_hold()},
            {"violations", violations}};
  if (mpc_abort) {
    j["mpc_abort"] = {{"reason", to_string(mpc_abort->reason)},
                      {"party", mpc_abort->party ? json(*mpc_abort->party + 1) : json(nullptr)}};
  }
  return j;
}

RunResult run_experiment(const RunConfig& cfg) {
  cfg.validate();
  const auto started = std::chrono::steady_clock::now();
  const auto timeout = std::chrono::milliseconds(cfg.phase_timeout_ms);

  const GroupParams params = GroupParams::by_name(cfg.group);
  const Group& grp = params.grp();
  const ContractFunction f = contract_for(cfg);
  const std::size_t n = cfg.party_count();

  std::vector<PartyId> ids;
  for (std::size_t i = 0; i < n; ++i) ids.push_back({"P" + std::to_string(i + 1)});

  Rng master(cfg.seed);
  Rng adversary_rng = master.fork("adversary");
  std::vector<Party> parties;
  parties.reserve(n);
  for (std::size_t i = 0; i < n; ++i) parties.emplace_back(ids[i], params, cfg.ell, master.fork("party/" + ids[i].name));
  IdealMpc mpc(master.fork("mpc"));
  Blockchain chain(params, cfg.ell);

  RunResult result;
  RunReport& report = result.report;
  report.inputs = cfg.values;
  report.recovered.assign(n, std::nullopt);

  std::vector<ContractInput> plain;
  for (std::size_t i = 0; i < n; ++i) plain.push_back({cfg.values[i], aux_for(cfg, i)});
  if (ContractResult direct = f.evaluate(plain)) {
    bool in_range = direct->values.size() == n;
    for (auto v : direct->values) in_range = in_range && v < (std::uint64_t{1} << cfg.ell);
    if (in_range) report.expected = direct->values;
  }

  // Freeze: parties build their messages concurrently; the chain sees them
  // in party order.
  std::vector<FreezeMessage> freezes(n);
  parallel_for(n, [&](std::size_t i) { freezes[i] = parties[i].on_freeze(f, ids, cfg.values[i], aux_for(cfg, i)); });
  const ContractId id = freezes[0].id;
  if (cfg.adversary == Adversary::kCorruptBitProof) corrupt_one_bit_proof(grp, freezes[0], adversary_rng);

  bool all_frozen = true;
  for (std::size_t i = 0; i < n; ++i) {
    all_frozen = chain.handle_freeze(freezes[i], ids[i]) == Outcome::kAccepted && all_frozen;
    if (i != 0) continue;
    if (cfg.adversary == Adversary::kDuplicateFreeze) chain.handle_freeze(freezes[0], ids[0]);
    if (cfg.adversary == Adversary::kEarlyFinalize) {
      chain.handle_finalize(premature_finalize(params, freezes[0], n, adversary_rng), ids[0]);
    }
  }

  // A rejected freeze is never resent, so the compute phase is unreachable.
  const bool computing = all_frozen && chain.wait_for_phase(id, Phase::kCompute, timeout);
  if (!computing && cfg.adversary != Adversary::kCorruptBitProof) {
    report.violations.push_back("compute phase not reached within " + std::to_string(cfg.phase_timeout_ms) + " ms");
  }

  if (computing) {
    const std::vector<FreezeRecord> records = chain.freeze_records(id);
    std::vector<std::optional<OutputMessage>> outputs(n);
    std::mutex outputs_mu;
    for (std::size_t i = 0; i < n; ++i) {
      mpc.connect(ids[i], [&, i](const OutputMessage& y) {
        std::lock_guard lock(outputs_mu);
        outputs[i] = y;
      });
    }
    std::vector<InputMessage> inputs(n);
    for (std::size_t i = 0; i < n; ++i) inputs[i] = parties[i].prepare_compute(id, records);
    parallel_for(n, [&](std::size_t i) { mpc.submit(ids[i], std::move(inputs[i])); });

    std::vector<std::optional<FinalizeOutcome>> finals(n);
    for (std::size_t i = 0; i < n; ++i) {
      if (!outputs[i]) {
        report.violations.push_back("party " + ids[i].name + " received no output from M");
        continue;
      }
      if (outputs[i]->y.is_abort()) report.mpc_abort = outputs[i]->y.abort();
      finals[i] = parties[i].finalize(*outputs[i], records);
      if (finals[i]) report.recovered[i] = finals[i]->own.value;
    }
    if (!report.mpc_abort && outputs[cfg.finalizer]) report.out = outputs[cfg.finalizer]->y.result().out;

    const std::size_t fin = cfg.finalizer;
    if (cfg.adversary == Adversary::kSwapCandidate || cfg.adversary == Adversary::kBadContract) {
      if (outputs[fin] && !outputs[fin]->y.is_abort()) {
        FinalizeMessage msg = parties[fin].finalize_unchecked(id, outputs[fin]->y.result());
        if (cfg.adversary == Adversary::kSwapCandidate) swap_one_candidate(msg, records.front(), adversary_rng);
        chain.handle_finalize(msg, ids[fin]);
      }
    } else if (cfg.race_finalize) {
      for (std::size_t i = 0; i < n; ++i) {
        if (finals[i]) chain.handle_finalize(finals[i]->message, ids[i]);
      }
    } else if (finals[fin]) {
      chain.handle_finalize(finals[fin]->message, ids[fin]);
    }
  }

  if (auto rec = chain.contract(id)) report.final_phase = rec->phase;
  bool all_recovered = true;
  std::vector<CurrencyValue> outs;
  for (const auto& v : report.recovered) {
    all_recovered = all_recovered && v.has_value();
    outs.push_back(v.value_or(0));
  }
  report.zero_sum = all_recovered && check_zero_sum(report.inputs, outs);
  report.final_state_hash = chain.state_hash();
  summarize_log(chain.log(), report);
  check_invariants(cfg, report);
  report.duration_ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - started).count();

  result.transcript.header = {cfg.group, cfg.ell, f.name(), {}};
  for (const auto& p : ids) result.transcript.header.parties.push_back(p.name);
  result.transcript.entries = chain.log();
  if (!cfg.transcript_path.empty()) write_transcript(cfg.transcript_path, result.transcript);
  if (!cfg.report_path.empty()) {
    std::ofstream out(cfg.report_path, std::ios::trunc);
    if (!out) throw Error("cannot open " + cfg.report_path + " for writing");
    out << report.to_json().dump(2) << "\n";
  }
  return result;
}

}  // namespace zkhawk
