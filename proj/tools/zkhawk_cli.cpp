#include <CLI11.hpp>
#include <iostream>
#include <string>
#include <vector>

#include "zkhawk/harness.hpp"
#include "zkhawk/transcript.hpp"

namespace {

constexpr int kExitInvariants = 1;
constexpr int kExitUsage = 2;

int run_command(zkhawk::RunConfig cfg) {
  auto result = zkhawk::run_experiment(cfg);
  std::cout << result.report.to_json().dump(2) << "\n";
  return result.report.invariants_hold() ? 0 : kExitInvariants;
}

int verify_command(const std::string& path) {
  auto report = zkhawk::verify_transcript(zkhawk::read_transcript(path));
  std::cout << report.to_json().dump(2) << "\n";
  for (const auto& c : report.checks) {
    if (!c.ok) std::cerr << "FAIL line " << c.line << ": " << c.kind << " proof from " << c.party << "\n";
  }
  return report.ok() ? 0 : kExitInvariants;
}

int replay_command(const std::string& path) {
  auto report = zkhawk::replay_transcript(zkhawk::read_transcript(path));
  std::cout << report.to_json().dump(2) << "\n";
  return report.ok() ? 0 : kExitInvariants;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"zkhawk private smart contract simulator"};
  app.require_subcommand(1);

  auto* run = app.add_subcommand("run", "Run one freeze/compute/finalize experiment");
  std::string config_path;
  zkhawk::RunConfig flags;
  std::string adversary;
  std::size_t finalizer = 1;
  run->add_option("--config", config_path, "JSON config file; flags override its fields")->check(CLI::ExistingFile);
  auto* o_contract = run->add_option("--contract", flags.contract, "identity | auction | bad");
  auto* o_values = run->add_option("--values", flags.values, "Comma-separated party balances")->delimiter(',');
  auto* o_aux = run->add_option("--aux", flags.aux, "Comma-separated aux inputs, one per party")->delimiter(',');
  auto* o_ell = run->add_option("--ell", flags.ell, "Bit width of currency values");
  auto* o_seed = run->add_option("--seed", flags.seed, "Master seed");
  auto* o_group = run->add_option("--group", flags.group, "production | toy-insecure");
  auto* o_adv = run->add_option("--adversary", adversary,
                                "none | corrupt-bit-proof | swap-candidate | bad-contract | duplicate-freeze | "
                                "early-finalize");
  auto* o_fin = run->add_option("--finalizer", finalizer, "1-based index of the party that posts finalize");
  auto* o_race = run->add_flag("--race-finalize", flags.race_finalize, "Every party posts its finalize");
  auto* o_tr = run->add_option("--transcript", flags.transcript_path, "Write the JSONL transcript here");
  auto* o_rep = run->add_option("--report", flags.report_path, "Write the JSON report here");
  auto* o_to = run->add_option("--phase-timeout-ms", flags.phase_timeout_ms, "Bound on each phase wait");

  auto* verify = app.add_subcommand("verify", "Re-check every proof in a transcript");
  std::string verify_path;
  verify->add_option("path", verify_path, "Transcript file")->required();

  auto* replay = app.add_subcommand("replay", "Replay a transcript through a fresh blockchain");
  std::string replay_path;
  replay->add_option("path", replay_path, "Transcript file")->required();

  CLI11_PARSE(app, argc, argv);

  try {
    if (*run) {
      zkhawk::RunConfig cfg = config_path.empty() ? zkhawk::RunConfig{} : zkhawk::load_config(config_path);
      if (o_contract->count()) cfg.contract = flags.contract;
      if (o_values->count()) cfg.values = flags.values;
      if (o_aux->count()) cfg.aux = flags.aux;
      if (o_ell->count()) cfg.ell = flags.ell;
      if (o_seed->count()) cfg.seed = flags.seed;
      if (o_group->count()) cfg.group = flags.group;
      if (o_race->count()) cfg.race_finalize = flags.race_finalize;
      if (o_tr->count()) cfg.transcript_path = flags.transcript_path;
      if (o_rep->count()) cfg.report_path = flags.report_path;
      if (o_to->count()) cfg.phase_timeout_ms = flags.phase_timeout_ms;
      if (o_adv->count()) {
        auto a = zkhawk::parse_adversary(adversary);
        if (!a) throw zkhawk::ConfigError("unknown adversary mode: " + adversary);
        cfg.adversary = *a;
      }
      if (o_fin->count()) {
        if (finalizer == 0) throw zkhawk::ConfigError("--finalizer is 1-based");
        cfg.finalizer = finalizer - 1;
      }
      return run_command(std::move(cfg));
    }
    if (*verify) return verify_command(verify_path);
    if (*replay) return replay_command(replay_path);
  } catch (const zkhawk::ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const zkhawk::TranscriptParseError& e) {
    std::cerr << "parse error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const zkhawk::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  }
  return kExitUsage;
}
