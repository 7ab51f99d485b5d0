#include "zkhawk/party.hpp"

#include <algorithm>

#include "zkhawk/pedersen.hpp"
#include "zkhawk/sigma.hpp"

namespace zkhawk {

Party::Party(PartyId id, GroupParams params, std::size_t ell, Rng rng)
    : id_(std::move(id)), params_(std::move(params)), ell_(ell), rng_(std::move(rng)) {
  if (ell_ == 0 || ell_ > max_supported_ell(params_.grp())) {
    throw Error("party: bit width " + std::to_string(ell_) + " unsupported");
  }
}

ContractId Party::create(const ContractFunction& f, const std::vector<PartyId>& parties) {
  if (party_index(parties, id_) == std::string::npos) throw Error("party " + id_.name + " is not in P");
  ContractId cid = contract_id(f, parties);
  identifiers_.insert_or_assign(cid, IdentifierRecord{cid, f, parties});
  return cid;
}

FreezeMessage Party::freeze(const ContractId& cid, const CoinOpening& opening, std::string in) {
  auto ident = identifiers_.find(cid);
  if (ident == identifiers_.end()) throw Error("freeze: unknown contract " + cid.hex());
  if (opening.value >= (std::uint64_t{1} << ell_)) throw Error("freeze: value out of range");
  if (in.size() > kMaxAuxBytes) throw Error("freeze: aux input too long");
  if (secrets_.contains(cid)) throw Error("freeze: already frozen " + cid.hex());

  const Group& grp = params_.grp();
  const auto index = static_cast<std::uint32_t>(party_index(ident->second.parties, id_));

  FreezeMessage msg;
  msg.id = cid;
  msg.parties = ident->second.parties;
  msg.coin = commit(params_, grp.scalar_from_u64(opening.value), opening.r);

  SecretElems se{cid, opening.value, opening.r, std::move(in), {}, {}};
  se.bits.reserve(ell_);
  msg.pairs.reserve(ell_);
  for (std::size_t k = 0; k < ell_; ++k) {
    BitSecret b;
    b.s0 = grp.random_scalar(rng_);
    b.s1 = grp.random_scalar(rng_);
    b.c0 = commit(params_, grp.scalar_from_u64(0), b.s0);
    b.c1 = commit(params_, grp.scalar_from_u64(1), b.s1);

    const unsigned first = rng_.next_bit() ? 1u : 0u;
    std::array<CandidateSlot, 2> pair;
    for (std::uint8_t slot = 0; slot < 2; ++slot) {
      const unsigned bit = slot == 0 ? first : 1u - first;
      const Commitment& c = bit == 0 ? b.c0 : b.c1;
      const Scalar& s = bit == 0 ? b.s0 : b.s1;
      Bytes ctx = bit_proof_context(cid, index, static_cast<std::uint32_t>(k), slot);
      pair[slot] = {c, bnizk_prove(params_, c, s, bit, ctx, rng_).encode(grp)};
    }
    msg.pairs.push_back(std::move(pair));
    se.first_slot.push_back(static_cast<std::uint8_t>(first));
    se.bits.push_back(std::move(b));
  }
  secrets_.emplace(cid, std::move(se));
  return msg;
}

FreezeMessage Party::on_freeze(const ContractFunction& f, const std::vector<PartyId>& parties, CurrencyValue value,
                               std::string in) {
  CoinOpening opening{value, params_.grp().random_scalar(rng_)};
  ContractId cid = create(f, parties);
  FreezeMessage msg = freeze(cid, opening, std::move(in));
  coins_.push_back(opening);
  return msg;
}

InputMessage Party::prepare_compute(const ContractId& cid, const std::vector<FreezeRecord>& records) {
  auto se = secrets_.find(cid);
  if (se == secrets_.end()) throw Error("prepare compute: nothing frozen for " + cid.hex());
  const IdentifierRecord& ident = identifiers_.at(cid);

  std::vector<FreezeRecord> mine;
  for (const auto& p : ident.parties) {
    auto it = std::find_if(records.begin(), records.end(),
                           [&](const FreezeRecord& r) { return r.id == cid && r.party == p; });
    if (it == records.end()) throw Error("freeze incomplete");
    mine.push_back(*it);
  }

  auto fhat = std::make_shared<const MpcFunction>(params_, ident.f, cid, ident.parties, ell_, std::move(mine));
  computations_.insert_or_assign(fhat->descriptor(), Computation{cid, fhat});
  const SecretElems& s = se->second;
  return InputMessage{fhat, ident.parties, MpcInput{s.value, s.r, s.in, s.bits}};
}

FinalizeMessage Party::finalize_unchecked(const ContractId& cid, const MpcResult& y) const {
  return FinalizeMessage{cid, y.selected, y.out, y.proof.encode(params_.grp())};
}

std::optional<FinalizeOutcome> Party::finalize(const OutputMessage& y, const std::vector<FreezeRecord>& records) {
  auto comp = computations_.find(y.fhat_descriptor);
  if (comp == computations_.end() || y.parties != comp->second.fhat->parties()) return std::nullopt;
  if (y.y.is_abort()) return std::nullopt;

  const ContractId cid = comp->second.id;
  const IdentifierRecord& ident = identifiers_.at(cid);
  FinalizeMessage msg = finalize_unchecked(cid, y.y.result());
  ContractRecord view{cid, ident.parties, {}, Phase::kCompute};
  FinalizeCheck check = check_finalize(params_, ell_, view, records, msg);
  if (check.outcome != Outcome::kAccepted) return std::nullopt;

  const Group& grp = params_.grp();
  const SecretElems& se = secrets_.at(cid);
  const std::size_t j = party_index(ident.parties, id_);
  CurrencyValue value = 0;
  Scalar r = grp.scalar_from_u64(0);
  Scalar power = grp.scalar_from_u64(1);
  const Scalar two = grp.scalar_from_u64(2);
  for (std::size_t k = 0; k < ell_; ++k) {
    const Commitment& chosen = msg.selected[j][k];
    const BitSecret& b = se.bits[k];
    unsigned v;
    if (chosen == b.c0) {
      v = 0;
    } else if (chosen == b.c1) {
      v = 1;
    } else {
      return std::nullopt;
    }
    value |= static_cast<CurrencyValue>(v) << k;
    r = grp.add(r, grp.mul(power, v == 0 ? b.s0 : b.s1));
    power = grp.mul(power, two);
  }
  if (!verify_opening(params_, check.output_coins[j], {grp.scalar_from_u64(value), r})) return std::nullopt;

  CoinOpening own{value, r};
  coins_.push_back(own);
  return FinalizeOutcome{std::move(msg), own};
}

const SecretElems* Party::secrets(const ContractId& cid) const {
  auto it = secrets_.find(cid);
  return it == secrets_.end() ? nullptr : &it->second;
}

const IdentifierRecord* Party::identifier(const ContractId& cid) const {
  auto it = identifiers_.find(cid);
  return it == identifiers_.end() ? nullptr : &it->second;
}

nlohmann::json Party::export_state() const {
  const Group& grp = params_.grp();
  nlohmann::json ids = nlohmann::json::array();
  for (const auto& [cid, ident] : identifiers_) {
    nlohmann::json ps = nlohmann::json::array();
    for (const auto& p : ident.parties) ps.push_back(p.name);
    ids.push_back({{"id", cid.hex()}, {"contract", ident.f.name()}, {"parties", ps}});
  }
  nlohmann::json secrets = nlohmann::json::array();
  for (const auto& [cid, se] : secrets_) {
    MpcInput x{se.value, se.r, se.in, se.bits};
    secrets.push_back({{"id", cid.hex()}, {"x", x.to_json(grp)}, {"first_slot", se.first_slot}});
  }
  nlohmann::json coins = nlohmann::json::array();
  for (const auto& c : coins_) coins.push_back({{"value", c.value}, {"r", to_hex(grp.encode_scalar(c.r))}});
  return {{"party", id_.name}, {"identifiers", ids}, {"secrets", secrets}, {"coins", coins}};
}

}  // namespace zkhawk
