#pragma once

#include <cstddef>
#include <iosfwd>
#include <nlohmann/json.hpp>
#include <string>
#include <vector>

#include "zkhawk/blockchain.hpp"

namespace zkhawk {

inline constexpr std::string_view kTranscriptFormat = "zkhawk-transcript";
inline constexpr int kTranscriptVersion = 1;

// Public run metadata stored in the header line.
struct TranscriptHeader {
  std::string group = "production";
  std::size_t ell = 0;
  std::string contract;
  std::vector<std::string> parties;

  nlohmann::json to_json() const;
};

// Header plus the blockchain log in order. Rendered as JSONL: one header
// line, then one line per message and per snapshot.
struct Transcript {
  TranscriptHeader header;
  std::vector<LogEntry> entries;

  std::size_t line_count() const { return 1 + entries.size(); }
};

// A transcript line that could not be parsed. `line` is 1-based.
class TranscriptParseError : public Error {
 public:
  TranscriptParseError(std::size_t line, const std::string& what);
  std::size_t line() const { return line_; }

 private:
  std::size_t line_;
};

std::string render_transcript(const Transcript& t);
void write_transcript(const std::string& path, const Transcript& t);

Transcript parse_transcript(std::istream& in);
Transcript read_transcript(const std::string& path);

struct ReplayReport {
  std::size_t messages = 0;
  // Messages whose replayed outcome or state hash differs from the record.
  std::vector<std::uint64_t> mismatched_seqs;
  Bytes recorded_final_hash;
  Bytes replayed_final_hash;

  bool ok() const { return mismatched_seqs.empty() && recorded_final_hash == replayed_final_hash; }
  nlohmann::json to_json() const;
};

// Feeds every recorded message to a fresh blockchain built from the header.
ReplayReport replay_transcript(const Transcript& t);

struct ProofCheck {
  std::size_t line = 0;
  std::string kind;  // "bit" or "balance"
  std::string party;
  std::uint32_t bit = 0;
  std::uint8_t slot = 0;
  bool ok = false;
};

struct VerifyReport {
  std::vector<ProofCheck> checks;

  std::size_t failures() const;
  bool ok() const { return failures() == 0; }
  nlohmann::json to_json() const;
};

// Re-runs every bit proof of each accepted freeze and the balance proof of
// each accepted finalize, using only public data from the transcript.
VerifyReport verify_transcript(const Transcript& t);

}  // namespace zkhawk
