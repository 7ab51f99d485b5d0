#include "zkhawk/transcript.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>

#include "zkhawk/sigma.hpp"

namespace zkhawk {

namespace {

using nlohmann::json;

json entry_to_json(const LogEntry& entry) {
  if (const auto* m = std::get_if<ReceivedMessage>(&entry)) {
    return {{"type", "message"}, {"seq", m->seq}, {"kind", m->kind}, {"sender", m->sender.name},
            {"bytes", to_hex(m->bytes)}};
  }
  const auto& s = std::get<StateSnapshot>(entry);
  return {{"type", "snapshot"},          {"seq", s.seq},
          {"trigger", s.trigger},        {"outcome", to_string(s.outcome)},
          {"state_hash", to_hex(s.state_hash)}, {"state", to_hex(s.state)}};
}

Bytes hex_field(const json& j, const char* key) {
  auto b = from_hex(j.at(key).get<std::string>());
  if (!b) throw std::invalid_argument(std::string("field '") + key + "' is not hex");
  return *b;
}

TranscriptHeader header_from_json(const json& j) {
  if (j.at("type").get<std::string>() != "header") throw std::invalid_argument("first line is not a header");
  if (j.at("format").get<std::string>() != kTranscriptFormat) throw std::invalid_argument("unknown format");
  if (j.at("version").get<int>() != kTranscriptVersion) throw std::invalid_argument("unsupported version");
  TranscriptHeader h;
  h.group = j.at("group").get<std::string>();
  h.ell = j.at("ell").get<std::size_t>();
  h.contract = j.at("contract").get<std::string>();
  h.parties = j.at("parties").get<std::vector<std::string>>();
  return h;
}

LogEntry entry_from_json(const json& j) {
  const auto type = j.at("type").get<std::string>();
  if (type == "message") {
    return ReceivedMessage{j.at("seq").get<std::uint64_t>(), j.at("kind").get<std::string>(),
                           PartyId{j.at("sender").get<std::string>()}, hex_field(j, "bytes")};
  }
  if (type == "snapshot") {
    StateSnapshot s;
    s.seq = j.at("seq").get<std::uint64_t>();
    s.trigger = j.at("trigger").get<std::string>();
    auto outcome = parse_outcome(j.at("outcome").get<std::string>());
    if (!outcome) throw std::invalid_argument("unknown outcome");
    s.outcome = *outcome;
    s.state_hash = hex_field(j, "state_hash");
    s.state = hex_field(j, "state");
    if (sha256(s.state) != s.state_hash) throw std::invalid_argument("state does not match state_hash");
    return s;
  }
  throw std::invalid_argument("unknown line type '" + type + "'");
}

}  // namespace

json TranscriptHeader::to_json() const {
  return {{"type", "header"}, {"format", kTranscriptFormat}, {"version", kTranscriptVersion},
          {"group", group},   {"ell", ell},                  {"contract", contract},
          {"parties", parties}};
}

TranscriptParseError::TranscriptParseError(std::size_t line, const std::string& what)
    : Error("line " + std::to_string(line) + ": " + what), line_(line) {}

std::string render_transcript(const Transcript& t) {
  std::string out = t.header.to_json().dump() + "\n";
  for (const auto& e : t.entries) out += entry_to_json(e).dump() + "\n";
  return out;
}

void write_transcript(const std::string& path, const Transcript& t) {
  std::ofstream f(path, std::ios::binary | std::ios::trunc);
  if (!f) throw Error("cannot open " + path + " for writing");
  f << render_transcript(t);
  if (!f.flush()) throw Error("write failed: " + path);
}

Transcript parse_transcript(std::istream& in) {
  Transcript t;
  std::string line;
  std::size_t lineno = 0;
  bool have_header = false;
  bool message_open = false;
  std::uint64_t open_seq = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) throw TranscriptParseError(lineno, "empty line");
    try {
      json j = json::parse(line);
      if (!have_header) {
        t.header = header_from_json(j);
        have_header = true;
        continue;
      }
      LogEntry e = entry_from_json(j);
      if (const auto* m = std::get_if<ReceivedMessage>(&e)) {
        if (message_open) throw std::invalid_argument("message without a following snapshot");
        message_open = true;
        open_seq = m->seq;
      } else {
        const auto& s = std::get<StateSnapshot>(e);
        if (message_open && open_seq != s.seq) throw std::invalid_argument("snapshot seq does not match message");
        message_open = false;
      }
      t.entries.push_back(std::move(e));
    } catch (const json::exception& ex) {
      throw TranscriptParseError(lineno, ex.what());
    } catch (const std::invalid_argument& ex) {
      throw TranscriptParseError(lineno, ex.what());
    }
  }
  if (!have_header) throw TranscriptParseError(lineno + 1, "missing header");
  if (message_open) throw TranscriptParseError(lineno + 1, "truncated: last message has no snapshot");
  return t;
}

Transcript read_transcript(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw Error("cannot open " + path);
  return parse_transcript(f);
}

json ReplayReport::to_json() const {
  return {{"messages", messages},
          {"mismatched_seqs", mismatched_seqs},
          {"recorded_final_hash", to_hex(recorded_final_hash)},
          {"replayed_final_hash", to_hex(replayed_final_hash)},
          {"ok", ok()}};
}

ReplayReport replay_transcript(const Transcript& t) {
  GroupParams params = GroupParams::by_name(t.header.group);
  Blockchain chain(params, t.header.ell);
  ReplayReport report;
  std::optional<Outcome> last_outcome;
  for (const auto& e : t.entries) {
    if (const auto* m = std::get_if<ReceivedMessage>(&e)) {
      ++report.messages;
      last_outcome = chain.handle_raw(m->bytes, m->sender);
      continue;
    }
    const auto& s = std::get<StateSnapshot>(e);
    report.recorded_final_hash = s.state_hash;
    if (s.seq == 0) {
      if (chain.state_hash() != s.state_hash) report.mismatched_seqs.push_back(0);
      continue;
    }
    if (!last_outcome || *last_outcome != s.outcome || chain.state_hash() != s.state_hash) {
      report.mismatched_seqs.push_back(s.seq);
    }
    last_outcome.reset();
  }
  report.replayed_final_hash = chain.state_hash();
  return report;
}

std::size_t VerifyReport::failures() const {
  return static_cast<std::size_t>(std::count_if(checks.begin(), checks.end(), [](const ProofCheck& c) { return !c.ok; }));
}

json VerifyReport::to_json() const {
  json arr = json::array();
  for (const auto& c : checks) {
    json j = {{"line", c.line}, {"kind", c.kind}, {"party", c.party}, {"ok", c.ok}};
    if (c.kind == "bit") {
      j["bit"] = c.bit;
      j["slot"] = c.slot;
    }
    arr.push_back(std::move(j));
  }
  return {{"checks", arr}, {"total", checks.size()}, {"failures", failures()}, {"ok", ok()}};
}

namespace {

void verify_message(const GroupParams& params, std::size_t ell, const ReceivedMessage& m, std::size_t line,
                    const LedgerState& before, VerifyReport& report) {
  const Group& grp = params.grp();
  if (m.kind == kFreezeTag) {
    FreezeMessage msg = FreezeMessage::decode(grp, m.bytes);
    const auto index = static_cast<std::uint32_t>(party_index(msg.parties, m.sender));
    for (std::uint32_t k = 0; k < msg.pairs.size(); ++k) {
      for (std::uint8_t slot = 0; slot < 2; ++slot) {
        const auto& cand = msg.pairs[k][slot];
        bool ok =
            bnizk_verify(params, cand.commitment, ByteSpan(cand.proof), bit_proof_context(msg.id, index, k, slot));
        report.checks.push_back({line, "bit", m.sender.name, k, slot, ok});
      }
    }
  } else if (m.kind == kFinalizeTag) {
    FinalizeMessage msg = FinalizeMessage::decode(grp, m.bytes);
    auto rec = before.contracts.find(msg.id);
    bool ok = rec != before.contracts.end() &&
              check_finalize(params, ell, rec->second, before.freeze_records, msg).outcome == Outcome::kAccepted;
    report.checks.push_back({line, "balance", m.sender.name, 0, 0, ok});
  }
}

}  // namespace

VerifyReport verify_transcript(const Transcript& t) {
  GroupParams params = GroupParams::by_name(t.header.group);
  VerifyReport report;
  LedgerState before;
  // Line 1 is the header; entry i sits on line i + 2.
  for (std::size_t i = 0; i < t.entries.size(); ++i) {
    const auto* m = std::get_if<ReceivedMessage>(&t.entries[i]);
    if (m == nullptr) {
      before = LedgerState::decode(params.grp(), std::get<StateSnapshot>(t.entries[i]).state);
      continue;
    }
    const auto* after = i + 1 < t.entries.size() ? std::get_if<StateSnapshot>(&t.entries[i + 1]) : nullptr;
    if (after == nullptr || after->outcome != Outcome::kAccepted) continue;
    try {
      verify_message(params, t.header.ell, *m, i + 2, before, report);
    } catch (const DecodeError&) {
      report.checks.push_back({i + 2, "decode", m->sender.name, 0, 0, false});
    }
  }
  return report;
}

}  // namespace zkhawk
