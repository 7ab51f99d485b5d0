// One PASS/FAIL line per acceptance criterion. `--only N` runs a single one.

#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <functional>
#include <sstream>
#include <string>
#include <vector>

#include "toy_oracle.hpp"
#include "zkhawk/harness.hpp"
#include "zkhawk/party.hpp"
#include "zkhawk/sigma.hpp"

namespace {

using namespace zkhawk;

struct Verdict {
  bool pass = false;
  std::string detail;
};

std::uint64_t below(Rng& rng, std::uint64_t bound) { return rng.next_u64() % bound; }

// Auction outcome computed here rather than through the library contract.
std::vector<CurrencyValue> auction_reference(const std::vector<CurrencyValue>& v, std::size_t& winner) {
  winner = 1;
  for (std::size_t i = 2; i < v.size(); ++i) {
    if (v[i] > v[winner]) winner = i;
  }
  std::vector<CurrencyValue> out = v;
  out[0] = v[0] + v[winner];
  out[winner] = 0;
  return out;
}

// Random auction values with seller + highest bid < 2^ell and a nonzero bid.
std::vector<CurrencyValue> auction_values(Rng& rng, std::size_t n, std::size_t ell) {
  const std::uint64_t limit = std::uint64_t{1} << ell;
  std::vector<CurrencyValue> v(n);
  const std::uint64_t top = 1 + below(rng, limit - 1);
  for (std::size_t i = 1; i < n; ++i) v[i] = below(rng, top + 1);
  v[1 + below(rng, n - 1)] = top;
  v[0] = below(rng, limit - top);
  return v;
}

Verdict criterion_1() {
  Rng rng(0xC1);
  const std::size_t ells[] = {4, 8, 16};
  std::size_t finalized = 0;
  std::size_t balanced = 0;
  std::string first_problem;
  const auto start = std::chrono::steady_clock::now();
  constexpr std::size_t kRuns = 500;
  for (std::size_t run = 0; run < kRuns; ++run) {
    RunConfig cfg;
    cfg.ell = ells[below(rng, 3)];
    cfg.seed = rng.next_u64();
    const bool auction = rng.next_bit();
    if (auction) {
      cfg.contract = "auction";
      cfg.values = auction_values(rng, 2 + below(rng, 4), cfg.ell);
    } else {
      cfg.contract = "identity";
      cfg.values.resize(1 + below(rng, 5));
      for (auto& v : cfg.values) v = below(rng, std::uint64_t{1} << cfg.ell);
    }
    RunReport r = run_experiment(cfg).report;
    CurrencyValue in = 0;
    CurrencyValue out = 0;
    bool all_recovered = true;
    for (std::size_t j = 0; j < cfg.values.size(); ++j) {
      in += cfg.values[j];
      if (!r.recovered[j]) all_recovered = false;
      else out += *r.recovered[j];
    }
    const bool ok_phase = r.final_phase == Phase::kFinalized;
    const bool ok_sum = all_recovered && in == out;
    finalized += ok_phase;
    balanced += ok_sum;
    if ((!ok_phase || !ok_sum || !r.invariants_hold()) && first_problem.empty()) {
      first_problem = " first failure: " + cfg.to_json().dump() + " -> " + r.to_json().dump();
    }
  }
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  std::ostringstream os;
  os << finalized << "/" << kRuns << " finalized, " << balanced << "/" << kRuns << " zero-sum, " << secs
     << " s (limit 60 s)" << first_problem;
  return {finalized == kRuns && balanced == kRuns && first_problem.empty() && secs < 60.0, os.str()};
}

Verdict criterion_2() {
  const GroupParams prod = GroupParams::standard();
  const GroupParams toy = GroupParams::toy();
  const Group& pg = prod.grp();
  const Group& tg = toy.grp();
  Rng rng(0xC2);
  constexpr std::size_t kSets = 1000;
  std::size_t agree = 0;
  std::size_t toy_agree = 0;
  std::size_t balanced_sets = 0;
  for (std::size_t t = 0; t < kSets; ++t) {
    const std::size_t n = 1 + below(rng, 5);
    constexpr std::uint64_t kLimit = 1 << 16;
    std::vector<std::uint64_t> v(n), w(n), r(n), s(n);
    std::uint64_t total = 0;
    for (auto& x : v) total += x = below(rng, kLimit);
    // Redistribute the total, then unbalance every odd set.
    std::uint64_t left = total;
    for (std::size_t j = 0; j + 1 < n; ++j) left -= w[j] = below(rng, std::min(left, kLimit - 1) + 1);
    w[n - 1] = left;
    const bool balanced = t % 2 == 0 || left >= kLimit;
    if (!balanced) {
      const std::uint64_t d = 1 + below(rng, 1000);
      std::size_t j = below(rng, n);
      if (rng.next_bit() && w[j] >= d) w[j] -= d;
      else w[j] += d;
    }
    for (auto& x : r) x = rng.next_u64();
    for (auto& x : s) x = rng.next_u64();
    std::int64_t diff = 0;
    for (std::size_t j = 0; j < n; ++j) diff += static_cast<std::int64_t>(w[j]) - static_cast<std::int64_t>(v[j]);
    balanced_sets += diff == 0;

    // Production group.
    GroupElement lhs = pg.identity();
    Scalar ex = pg.scalar_from_u64(0);
    for (std::size_t j = 0; j < n; ++j) {
      Commitment coin = commit(prod, pg.scalar_from_u64(v[j]), pg.scalar_from_u64(r[j]));
      Commitment out = commit(prod, pg.scalar_from_u64(w[j]), pg.scalar_from_u64(s[j]));
      lhs = pg.mul(lhs, pg.div(out.element, coin.element));
      ex = pg.add(ex, pg.sub(pg.scalar_from_u64(s[j]), pg.scalar_from_u64(r[j])));
    }
    agree += (lhs == pg.exp(prod.h, ex)) == (diff == 0);

    // Toy group through the library and through the integer oracle.
    GroupElement tl = tg.identity();
    Scalar tex = tg.scalar_from_u64(0);
    std::uint64_t ol = 1;
    std::uint64_t oex = 0;
    for (std::size_t j = 0; j < n; ++j) {
      Commitment coin = commit(toy, tg.scalar_from_u64(v[j]), tg.scalar_from_u64(r[j]));
      Commitment out = commit(toy, tg.scalar_from_u64(w[j]), tg.scalar_from_u64(s[j]));
      tl = tg.mul(tl, tg.div(out.element, coin.element));
      tex = tg.add(tex, tg.sub(tg.scalar_from_u64(s[j]), tg.scalar_from_u64(r[j])));
      ol = toy_oracle::mul(ol, toy_oracle::div(toy_oracle::commit(w[j], s[j]), toy_oracle::commit(v[j], r[j])));
      oex = toy_oracle::scalar_add(oex, toy_oracle::scalar_sub(s[j], r[j]));
    }
    const bool lib_holds = tl == tg.exp(toy.h, tex);
    const bool oracle_holds = ol == toy_oracle::exp(toy_oracle::kH, oex);
    const std::int64_t q = static_cast<std::int64_t>(toy_oracle::kQ);
    const bool oracle_zero = ((diff % q) + q) % q == 0;
    toy_agree += lib_holds == oracle_holds && oracle_holds == oracle_zero && tl.bytes() == Bytes{std::uint8_t(ol)};
  }
  std::ostringstream os;
  os << "identity iff zero-sum in " << agree << "/" << kSets << " production sets (" << balanced_sets
     << " balanced), toy library matches integer oracle in " << toy_agree << "/" << kSets;
  return {agree == kSets && toy_agree == kSets, os.str()};
}

// Hash of the snapshot preceding `seq` and of the snapshot for `seq`.
bool state_unchanged_at(const Transcript& t, std::uint64_t seq) {
  const StateSnapshot* prev = nullptr;
  for (const auto& e : t.entries) {
    const auto* s = std::get_if<StateSnapshot>(&e);
    if (s == nullptr) continue;
    if (s->seq == seq) return prev != nullptr && prev->state_hash == s->state_hash;
    prev = s;
  }
  return false;
}

Verdict criterion_3() {
  struct Mode {
    Adversary adversary;
    std::string kind;
    Outcome outcome;
  };
  const Mode modes[] = {{Adversary::kCorruptBitProof, "freeze", Outcome::kBitProofInvalid},
                        {Adversary::kSwapCandidate, "finalize", Outcome::kSchnorrFailed},
                        {Adversary::kBadContract, "finalize", Outcome::kSchnorrFailed}};
  Rng rng(0xC3);
  std::ostringstream os;
  bool pass = true;
  for (const auto& mode : modes) {
    std::size_t ok = 0;
    for (std::size_t run = 0; run < 100; ++run) {
      RunConfig cfg;
      cfg.adversary = mode.adversary;
      cfg.ell = 8;
      cfg.seed = rng.next_u64();
      cfg.values.resize(2 + below(rng, 4));
      for (auto& v : cfg.values) v = below(rng, 255);
      RunResult res = run_experiment(cfg);
      const auto& r = res.report;
      bool good = r.rejections.size() == 1 && r.rejections[0].kind == mode.kind &&
                  r.rejections[0].outcome == mode.outcome && r.final_phase != Phase::kFinalized &&
                  state_unchanged_at(res.transcript, r.rejections[0].seq) && r.invariants_hold();
      ok += good;
    }
    pass = pass && ok == 100;
    os << to_string(mode.adversary) << " " << ok << "/100 (" << to_string(mode.outcome) << "); ";
  }
  os << "state hash unchanged on each rejection";
  return {pass, os.str()};
}

// Exhaustive search over every (c_a, c_b, f, z_a, z_b) in the toy group for a
// bit proof that verifies against a commitment to 2. Challenges come from
// the real oracle.
std::size_t toy_forgeries_for_two(std::size_t& tried) {
  const GroupParams toy = GroupParams::toy();
  const Group& grp = toy.grp();
  std::vector<GroupElement> elements;
  for (unsigned b = 0; b < 256; ++b) {
    if (auto e = grp.decode_element(Bytes{static_cast<std::uint8_t>(b)})) elements.push_back(*e);
  }
  const std::uint64_t q = toy_oracle::kQ;
  const Commitment c = commit(toy, grp.scalar_from_u64(2), grp.scalar_from_u64(5));
  const Bytes ctx = bit_proof_context(ContractId{}, 0, 0, 0);
  std::size_t found = 0;
  tried = 0;
  for (const auto& ca : elements) {
    for (const auto& cb : elements) {
      for (std::uint64_t f = 0; f < q; ++f) {
        for (std::uint64_t za = 0; za < q; ++za) {
          for (std::uint64_t zb = 0; zb < q; ++zb) {
            BitProof p{ca, cb, grp.scalar_from_u64(f), grp.scalar_from_u64(za), grp.scalar_from_u64(zb)};
            ++tried;
            found += bnizk_verify(toy, c, p, ctx);
          }
        }
      }
    }
  }
  return found;
}

Verdict criterion_4() {
  const GroupParams params = GroupParams::standard();
  const Group& grp = params.grp();
  Rng rng(0xC4);
  constexpr std::size_t kN = 1000;
  std::size_t schnorr_ok = 0, bit_ok = 0, schnorr_mut = 0, bit_mut = 0;
  for (std::size_t i = 0; i < kN; ++i) {
    Bytes ctx(32);
    rng.fill(ctx);
    const Scalar w = grp.random_scalar(rng);
    const GroupElement stmt = grp.exp(params.h, w);
    SchnorrProof sp = schnorr_prove(grp, stmt, params.h, w, ctx, rng);
    schnorr_ok += schnorr_verify(grp, stmt, params.h, sp, ctx);

    const unsigned bit = rng.next_bit() ? 1 : 0;
    const Scalar r = grp.random_scalar(rng);
    const Commitment c = commit(params, grp.scalar_from_u64(bit), r);
    BitProof bp = bnizk_prove(params, c, r, bit, ctx, rng);
    bit_ok += bnizk_verify(params, c, bp, ctx);

    // One mutation per proof, cycling through fields and bindings.
    const Scalar one = grp.scalar_from_u64(1);
    Bytes other_ctx = ctx;
    other_ctx[i % other_ctx.size()] ^= 0x01;
    switch (i % 4) {
      case 0: sp.response = grp.add(sp.response, one); break;
      case 1: sp.nonce_commitment = grp.mul(sp.nonce_commitment, params.g); break;
      default: break;
    }
    bool sv = false;
    if (i % 4 == 2) sv = schnorr_verify(grp, stmt, params.h, sp, other_ctx);
    else if (i % 4 == 3) sv = schnorr_verify(grp, grp.mul(stmt, params.g), params.h, sp, ctx);
    else sv = schnorr_verify(grp, stmt, params.h, sp, ctx);
    schnorr_mut += sv;

    switch (i % 6) {
      case 0: bp.f = grp.add(bp.f, one); break;
      case 1: bp.za = grp.add(bp.za, one); break;
      case 2: bp.zb = grp.add(bp.zb, one); break;
      case 3: bp.ca = grp.mul(bp.ca, params.g); break;
      case 4: bp.cb = grp.mul(bp.cb, params.h); break;
      default: break;
    }
    bit_mut += i % 6 == 5 ? bnizk_verify(params, c, bp, other_ctx) : bnizk_verify(params, c, bp, ctx);
  }
  std::size_t tried = 0;
  const std::size_t forgeries = toy_forgeries_for_two(tried);
  std::ostringstream os;
  os << "honest schnorr " << schnorr_ok << "/" << kN << ", honest bit " << bit_ok << "/" << kN
     << "; mutated schnorr " << schnorr_mut << "/" << kN << ", mutated bit " << bit_mut << "/" << kN
     << "; toy search: " << forgeries << " accepting bit proofs for a commitment to 2 among " << tried
     << " candidates (required 0)";
  return {schnorr_ok == kN && bit_ok == kN && schnorr_mut == 0 && bit_mut == 0 && forgeries == 0, os.str()};
}

Verdict criterion_5() {
  Rng rng(0xC5);
  std::size_t runs = 0, good = 0;
  auto check = [&](const std::vector<CurrencyValue>& values, std::size_t ell, std::uint64_t seed) {
    RunConfig cfg;
    cfg.contract = "auction";
    cfg.values = values;
    cfg.ell = ell;
    cfg.seed = seed;
    RunReport r = run_experiment(cfg).report;
    std::size_t winner = 0;
    auto want = auction_reference(values, winner);
    bool ok = r.final_phase == Phase::kFinalized && r.out == std::to_string(winner);
    for (std::size_t j = 0; j < values.size(); ++j) ok = ok && r.recovered[j] == want[j];
    ++runs;
    good += ok;
  };
  check({0, 5, 3}, 4, 1);
  check({2, 4, 4}, 4, 2);
  check({7, 9, 9, 9}, 8, 3);
  check({1, 1, 6, 6, 2}, 4, 4);
  for (int t = 0; t < 100; ++t) {
    const std::size_t ell = t % 2 ? 8 : 4;
    auto values = auction_values(rng, 2 + below(rng, 4), ell);
    if (t % 3 == 0 && values.size() > 2) values[values.size() - 1] = values[1] = *std::max_element(values.begin() + 1, values.end());
    check(values, ell, rng.next_u64());
  }

  // First-slot bits over 1000 freezes at ell = 4.
  const GroupParams params = GroupParams::standard();
  const std::vector<PartyId> ids{{"P1"}};
  const ContractFunction f = identity_contract(1);
  std::size_t ones = 0, bits = 0;
  for (std::uint64_t t = 0; t < 1000; ++t) {
    Party p(ids[0], params, 4, Rng(0xF5000 + t));
    FreezeMessage msg = p.on_freeze(f, ids, t % 16, "");
    for (auto b : p.secrets(msg.id)->first_slot) {
      ones += b;
      ++bits;
    }
  }
  const double freq = static_cast<double>(ones) / static_cast<double>(bits);
  std::ostringstream os;
  os << good << "/" << runs << " auctions recovered as expected (winner 0, seller deposit + max bid, earliest "
     << "bidder wins ties); first-slot bit frequency " << freq << " over " << bits << " bits (0.5 +- 0.05)";
  return {good == runs && freq >= 0.45 && freq <= 0.55, os.str()};
}

Verdict criterion_6() {
  std::vector<RunConfig> cfgs;
  {
    RunConfig c;
    c.contract = "auction";
    c.values = {0, 5, 3};
    c.ell = 8;
    c.seed = 6;
    cfgs.push_back(c);
    c.adversary = Adversary::kDuplicateFreeze;
    cfgs.push_back(c);
    c.adversary = Adversary::kSwapCandidate;
    cfgs.push_back(c);
    c.adversary = Adversary::kNone;
    c.race_finalize = true;
    c.values = {1, 2, 2, 2};
    cfgs.push_back(c);
  }
  std::size_t identical = 0, replayed = 0, verified = 0, flipped_caught = 0;
  const Group& grp = GroupParams::standard().grp();
  for (const auto& cfg : cfgs) {
    RunResult a = run_experiment(cfg);
    RunResult b = run_experiment(cfg);
    const std::string text = render_transcript(a.transcript);
    identical += text == render_transcript(b.transcript);
    std::istringstream in(text);
    Transcript parsed = parse_transcript(in);
    ReplayReport rep = replay_transcript(parsed);
    replayed += rep.ok() && rep.replayed_final_hash == a.report.final_state_hash;
    verified += verify_transcript(parsed).ok();

    Transcript t = parsed;
    for (auto& e : t.entries) {
      auto* m = std::get_if<ReceivedMessage>(&e);
      if (m == nullptr || m->kind != kFreezeTag) continue;
      FreezeMessage msg = FreezeMessage::decode(grp, m->bytes);
      msg.pairs[0][0].proof.back() ^= 0x01;
      m->bytes = msg.encode(grp);
      break;
    }
    flipped_caught += verify_transcript(t).failures() == 1;
  }
  const std::size_t n = cfgs.size();
  std::ostringstream os;
  os << identical << "/" << n << " byte-identical, " << replayed << "/" << n << " replay to the recorded hash, "
     << verified << "/" << n << " verify offline, " << flipped_caught << "/" << n << " flipped proof bytes caught";
  return {identical == n && replayed == n && verified == n && flipped_caught == n, os.str()};
}

}  // namespace

int main(int argc, char** argv) {
  const std::vector<std::pair<const char*, std::function<Verdict()>>> criteria = {
      {"end-to-end honest correctness", criterion_1},
      {"balance identity matches zero-sum", criterion_2},
      {"soundness negative suite", criterion_3},
      {"NIZK completeness and soundness", criterion_4},
      {"output recovery and first-slot balance", criterion_5},
      {"transcript determinism and replay", criterion_6},
  };
  int only = 0;
  for (int i = 1; i < argc; ++i) {
    std::string arg = argv[i];
    if (arg == "--only" && i + 1 < argc) {
      only = std::atoi(argv[++i]);
    } else {
      std::fprintf(stderr, "usage: %s [--only N]\n", argv[0]);
      return 2;
    }
  }
  if (only < 0 || only > static_cast<int>(criteria.size())) {
    std::fprintf(stderr, "no criterion %d\n", only);
    return 2;
  }
  bool all = true;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    if (only != 0 && static_cast<int>(i) + 1 != only) continue;
    Verdict v;
    try {
      v = criteria[i].second();
    } catch (const std::exception& e) {
      v = {false, std::string("exception: ") + e.what()};
    }
    all = all && v.pass;
    std::printf("criterion %zu [%s] %s: %s\n", i + 1, v.pass ? "PASS" : "FAIL", criteria[i].first, v.detail.c_str());
    std::fflush(stdout);
  }
  return all ? 0 : 1;
}
