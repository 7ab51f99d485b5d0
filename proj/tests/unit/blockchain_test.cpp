#include "zkhawk/blockchain.hpp"

#include <gtest/gtest.h>

#include "zkhawk/party.hpp"
#include "zkhawk/sigma.hpp"

namespace zkhawk {
namespace {

constexpr std::size_t kEll = 4;

class Chain : public ::testing::Test {
 protected:
  Chain() {
    for (std::size_t i = 0; i < 2; ++i) {
      ids.push_back({"P" + std::to_string(i + 1)});
    }
    for (std::size_t i = 0; i < 2; ++i) parties.emplace_back(ids[i], params, kEll, Rng(100 + i));
    for (std::size_t i = 0; i < 2; ++i) freezes.push_back(parties[i].on_freeze(f, ids, values[i], ""));
    id = freezes[0].id;
  }

  // Freezes both parties, runs M and returns the honest finalize message.
  FinalizeMessage honest_finalize() {
    EXPECT_EQ(chain.handle_freeze(freezes[0], ids[0]), Outcome::kAccepted);
    EXPECT_EQ(chain.handle_freeze(freezes[1], ids[1]), Outcome::kAccepted);
    auto records = chain.freeze_records(id);
    std::vector<MpcInput> xs;
    std::shared_ptr<const MpcFunction> fhat;
    for (auto& party : parties) {
      InputMessage in = party.prepare_compute(id, records);
      fhat = in.fhat;
      xs.push_back(in.x);
    }
    Rng m(9);
    y = fhat->evaluate(xs, m);
    EXPECT_FALSE(y.is_abort());
    return parties[0].finalize_unchecked(id, y.result());
  }

  GroupParams params = GroupParams::standard();
  ContractFunction f = identity_contract(2);
  std::vector<PartyId> ids;
  std::vector<Party> parties;
  std::vector<CurrencyValue> values{3, 12};
  std::vector<FreezeMessage> freezes;
  ContractId id;
  MpcOutput y;
  Blockchain chain{params, kEll};
};

TEST_F(Chain, InitState) {
  EXPECT_TRUE(chain.state().contracts.empty());
  EXPECT_TRUE(chain.state().frozen_coins.empty());
  EXPECT_EQ(chain.snapshot_log().size(), 1u);
  EXPECT_EQ(chain.snapshot_log()[0].trigger, "init");
}

TEST_F(Chain, PhaseAdvancesWhenAllFrozen) {
  EXPECT_EQ(chain.handle_freeze(freezes[0], ids[0]), Outcome::kAccepted);
  EXPECT_EQ(chain.contract(id)->phase, Phase::kFreeze);
  EXPECT_EQ(chain.contract(id)->frozen.size(), 1u);
  EXPECT_EQ(chain.handle_freeze(freezes[1], ids[1]), Outcome::kAccepted);
  EXPECT_EQ(chain.contract(id)->phase, Phase::kCompute);
  EXPECT_EQ(chain.frozen_coins(id).size(), 2u);
  EXPECT_EQ(chain.snapshot_log().size(), 3u);
}

TEST_F(Chain, CandidatePairsStoredSorted) {
  chain.handle_freeze(freezes[0], ids[0]);
  auto rec = chain.freeze_record(id, ids[0]);
  ASSERT_TRUE(rec);
  for (const auto& pair : rec->candidates) EXPECT_LT(pair[0], pair[1]);
}

struct RejectCase {
  const char* name;
  Outcome expected;
};

TEST_F(Chain, FreezeRejectionsLeaveStateUntouched) {
  auto check = [&](const FreezeMessage& msg, const PartyId& sender, Outcome want) {
    Bytes before = chain.state_hash();
    EXPECT_EQ(chain.handle_freeze(msg, sender), want);
    EXPECT_EQ(chain.state_hash(), before);
    EXPECT_EQ(chain.snapshot_log().back().outcome, want);
  };
  check(freezes[0], PartyId{"mallory"}, Outcome::kSenderNotParty);

  FreezeMessage corrupt = freezes[0];
  corrupt.pairs[2][1].proof[70] ^= 1;
  check(corrupt, ids[0], Outcome::kBitProofInvalid);

  FreezeMessage dup = freezes[0];
  dup.pairs[1][1] = dup.pairs[1][0];
  check(dup, ids[0], Outcome::kDuplicateCandidate);

  FreezeMessage short_msg = freezes[0];
  short_msg.pairs.pop_back();
  check(short_msg, ids[0], Outcome::kBadShape);

  FreezeMessage wrong_slot = freezes[0];
  std::swap(wrong_slot.pairs[0][0].proof, wrong_slot.pairs[0][1].proof);
  check(wrong_slot, ids[0], Outcome::kBitProofInvalid);

  EXPECT_EQ(chain.handle_freeze(freezes[0], ids[0]), Outcome::kAccepted);
  check(freezes[0], ids[0], Outcome::kAlreadyFrozen);

  FreezeMessage mismatch = freezes[1];
  mismatch.parties = {ids[1], ids[0]};
  check(mismatch, ids[1], Outcome::kPartyMismatch);
}

TEST_F(Chain, DuplicateNamesRejected) {
  FreezeMessage msg = freezes[0];
  msg.parties = {ids[0], ids[0]};
  EXPECT_EQ(chain.handle_freeze(msg, ids[0]), Outcome::kBadShape);
  EXPECT_TRUE(chain.state().contracts.empty());
}

TEST_F(Chain, FreezeAfterComputeIsWrongPhase) {
  honest_finalize();
  FreezeMessage again = freezes[0];
  EXPECT_EQ(chain.handle_freeze(again, ids[0]), Outcome::kWrongPhase);
}

TEST_F(Chain, HonestFinalizeAccepted) {
  FinalizeMessage fin = honest_finalize();
  EXPECT_EQ(chain.handle_finalize(fin, ids[0]), Outcome::kAccepted);
  EXPECT_EQ(chain.contract(id)->phase, Phase::kFinalized);
  auto coins = chain.frozen_coins(id);
  ASSERT_EQ(coins.size(), 2u);
  EXPECT_EQ(coins[0].coin, recompose_bits(params, fin.selected[0], kEll));
}

TEST_F(Chain, SecondFinalizeRejected) {
  FinalizeMessage fin = honest_finalize();
  EXPECT_EQ(chain.handle_finalize(fin, ids[0]), Outcome::kAccepted);
  Bytes before = chain.state_hash();
  EXPECT_EQ(chain.handle_finalize(fin, ids[1]), Outcome::kWrongPhase);
  EXPECT_EQ(chain.state_hash(), before);
}

TEST_F(Chain, FinalizeRejections) {
  FinalizeMessage fin = honest_finalize();
  auto reject = [&](const FinalizeMessage& msg, Outcome want) {
    Bytes before = chain.state_hash();
    EXPECT_EQ(chain.handle_finalize(msg, ids[0]), want);
    EXPECT_EQ(chain.state_hash(), before);
  };

  auto rec = *chain.freeze_record(id, ids[1]);
  FinalizeMessage swapped = fin;
  Commitment& c = swapped.selected[1][2];
  c = c == rec.candidates[2][0] ? rec.candidates[2][1] : rec.candidates[2][0];
  reject(swapped, Outcome::kSchnorrFailed);

  FinalizeMessage foreign = fin;
  foreign.selected[0][0] = freezes[0].coin;
  reject(foreign, Outcome::kCandidateNotMember);

  FinalizeMessage short_rows = fin;
  short_rows.selected.pop_back();
  reject(short_rows, Outcome::kBadShape);

  FinalizeMessage bad_proof = fin;
  bad_proof.proof.back() ^= 1;
  reject(bad_proof, Outcome::kSchnorrFailed);

  FinalizeMessage unknown = fin;
  unknown.id.bytes[0] ^= 1;
  reject(unknown, Outcome::kUnknownContract);

  EXPECT_EQ(chain.handle_finalize(fin, ids[0]), Outcome::kAccepted);
}

TEST_F(Chain, FinalizeBeforeComputeIsWrongPhase) {
  chain.handle_freeze(freezes[0], ids[0]);
  FinalizeMessage fin;
  fin.id = id;
  EXPECT_EQ(chain.handle_finalize(fin, ids[0]), Outcome::kWrongPhase);
}

TEST_F(Chain, StoredStateReverifies) {
  FinalizeMessage fin = honest_finalize();
  ASSERT_EQ(chain.handle_finalize(fin, ids[0]), Outcome::kAccepted);
  // Output coins over recorded input coins must equal the proven statement.
  const Group& grp = params.grp();
  GroupElement ratio = grp.identity();
  for (const auto& fc : chain.frozen_coins(id)) ratio = grp.mul(ratio, fc.coin.element);
  for (const auto& fr : chain.freeze_records(id)) ratio = grp.div(ratio, fr.coin.element);
  EXPECT_TRUE(schnorr_verify(grp, ratio, params.h, ByteSpan(fin.proof), balance_proof_context(id)));
}

TEST_F(Chain, RawGarbageIsMalformed) {
  Bytes junk{0, 0, 0, 6, 'f', 'r', 'e', 'e', 'z', 'e', 1, 2};
  Bytes before = chain.state_hash();
  EXPECT_EQ(chain.handle_raw(junk, ids[0]), Outcome::kMalformed);
  EXPECT_EQ(chain.handle_raw(Bytes{1}, ids[0]), Outcome::kMalformed);
  EXPECT_EQ(chain.state_hash(), before);
  EXPECT_EQ(chain.snapshot_log().size(), 3u);
}

TEST_F(Chain, RawDispatchMatchesTyped) {
  EXPECT_EQ(chain.handle_raw(freezes[0].encode(params.grp()), ids[0]), Outcome::kAccepted);
  EXPECT_EQ(chain.contract(id)->frozen.size(), 1u);
}

TEST_F(Chain, LedgerStateRoundTrip) {
  honest_finalize();
  LedgerState s = chain.state();
  EXPECT_EQ(LedgerState::decode(params.grp(), s.encode(params.grp())), s);
}

TEST_F(Chain, LogInterleavesMessagesAndSnapshots) {
  honest_finalize();
  auto log = chain.log();
  ASSERT_EQ(log.size(), 5u);
  EXPECT_TRUE(std::holds_alternative<StateSnapshot>(log[0]));
  EXPECT_TRUE(std::holds_alternative<ReceivedMessage>(log[1]));
  EXPECT_TRUE(std::holds_alternative<StateSnapshot>(log[2]));
  EXPECT_EQ(std::get<ReceivedMessage>(log[3]).seq, std::get<StateSnapshot>(log[4]).seq);
}

TEST_F(Chain, ListenerSeesEverySnapshot) {
  std::vector<std::uint64_t> seen;
  chain.subscribe([&](const StateSnapshot& s) { seen.push_back(s.seq); });
  honest_finalize();
  EXPECT_EQ(seen, (std::vector<std::uint64_t>{1, 2}));
}

TEST_F(Chain, WaitForPhaseTimesOut) {
  EXPECT_FALSE(chain.wait_for_phase(id, Phase::kCompute, std::chrono::milliseconds(5)));
  honest_finalize();
  EXPECT_TRUE(chain.wait_for_phase(id, Phase::kCompute, std::chrono::milliseconds(5)));
}

TEST(ChainLimits, FieldGuard) {
  const Group& toy = GroupParams::toy().grp();
  EXPECT_EQ(max_supported_ell(toy), 2u);
  EXPECT_TRUE(fits_in_field(toy, 2, 2));
  EXPECT_FALSE(fits_in_field(toy, 3, 2));
  EXPECT_EQ(max_supported_ell(GroupParams::standard().grp()), 63u);
  EXPECT_THROW(Blockchain(GroupParams::toy(), 3), Error);
}

}  // namespace
}  // namespace zkhawk
