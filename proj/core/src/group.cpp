#include "zkhawk/group.hpp"

#include <sodium.h>

#include <algorithm>
#include <iterator>

#include "sodium_init.hpp"

namespace zkhawk {

namespace {

namespace mp = boost::multiprecision;

Bytes to_fixed_be(const BigUint& v, std::size_t width) {
  Bytes minimal;
  mp::export_bits(v, std::back_inserter(minimal), 8, true);
  // export_bits writes a single zero byte for v == 0.
  while (minimal.size() > 1 && minimal.front() == 0) minimal.erase(minimal.begin());
  if (v == 0) minimal.clear();
  if (minimal.size() > width) throw Error("integer does not fit fixed-width encoding");
  Bytes out(width - minimal.size(), 0);
  out.insert(out.end(), minimal.begin(), minimal.end());
  return out;
}

BigUint from_be(ByteSpan bytes) {
  BigUint v = 0;
  if (!bytes.empty()) mp::import_bits(v, bytes.begin(), bytes.end(), 8, true);
  return v;
}

std::size_t bit_length(const BigUint& v) { return v == 0 ? 0 : mp::msb(v) + 1; }

class Ristretto255 final : public Group {
 public:
  Ristretto255() : Group(order_constant(), crypto_core_ristretto255_BYTES) {
    detail::ensure_sodium();
    std::array<std::uint8_t, crypto_core_ristretto255_SCALARBYTES> one{};
    one[0] = 1;
    Bytes g(crypto_core_ristretto255_BYTES);
    if (crypto_scalarmult_ristretto255_base(g.data(), one.data()) != 0) throw Error("ristretto255 basepoint");
    generator_ = GroupElement(std::move(g));
  }

  std::string_view name() const override { return "ristretto255"; }
  bool insecure() const override { return false; }

  GroupElement identity() const override { return GroupElement(Bytes(crypto_core_ristretto255_BYTES, 0)); }
  GroupElement generator() const override { return generator_; }

  GroupElement exp(const GroupElement& base, const Scalar& e) const override {
    if (e.is_zero()) return identity();
    auto le = scalar_le(e);
    Bytes out(crypto_core_ristretto255_BYTES);
    // libsodium reports an identity result as an error.
    const int rc = base == generator_ ? crypto_scalarmult_ristretto255_base(out.data(), le.data())
                                      : crypto_scalarmult_ristretto255(out.data(), le.data(), base.bytes().data());
    if (rc != 0) return identity();
    return GroupElement(std::move(out));
  }

  GroupElement mul(const GroupElement& a, const GroupElement& b) const override {
    Bytes out(crypto_core_ristretto255_BYTES);
    if (crypto_core_ristretto255_add(out.data(), a.bytes().data(), b.bytes().data()) != 0) {
      throw Error("ristretto255 add on invalid encoding");
    }
    return GroupElement(std::move(out));
  }

  GroupElement div(const GroupElement& a, const GroupElement& b) const override {
    Bytes out(crypto_core_ristretto255_BYTES);
    if (crypto_core_ristretto255_sub(out.data(), a.bytes().data(), b.bytes().data()) != 0) {
      throw Error("ristretto255 sub on invalid encoding");
    }
    return GroupElement(std::move(out));
  }

  bool is_member(ByteSpan encoding) const override {
    return encoding.size() == crypto_core_ristretto255_BYTES &&
           crypto_core_ristretto255_is_valid_point(encoding.data()) == 1;
  }

  GroupElement map_to_group(ByteSpan uniform64) const override {
    if (uniform64.size() != crypto_core_ristretto255_HASHBYTES) throw Error("map_to_group expects 64 bytes");
    Bytes out(crypto_core_ristretto255_BYTES);
    crypto_core_ristretto255_from_hash(out.data(), uniform64.data());
    return GroupElement(std::move(out));
  }

 private:
  static BigUint order_constant() {
    return (BigUint(1) << 252) + BigUint("27742317777372353535851937790883648493");
  }

  std::array<std::uint8_t, 32> scalar_le(const Scalar& e) const {
    Bytes be = to_fixed_be(e.value(), 32);
    std::array<std::uint8_t, 32> le;
    std::reverse_copy(be.begin(), be.end(), le.begin());
    return le;
  }

  GroupElement generator_;
};

class ModularGroup final : public Group {
 public:
  ModularGroup(std::string name, BigUint p, const BigUint& q, const BigUint& g, bool insecure)
      : Group(q, (bit_length(p) + 7) / 8),
        name_(std::move(name)),
        p_(std::move(p)),
        cofactor_((p_ - 1) / q),
        insecure_(insecure) {
    if ((p_ - 1) % q != 0) throw Error("modular group: q does not divide p - 1");
    if (g <= 1 || g >= p_ || mp::powm(g, q, p_) != 1) throw Error("modular group: g does not have order q");
    generator_ = encode(g);
  }

  std::string_view name() const override { return name_; }
  bool insecure() const override { return insecure_; }

  GroupElement identity() const override { return encode(1); }
  GroupElement generator() const override { return generator_; }

  GroupElement exp(const GroupElement& base, const Scalar& e) const override {
    return encode(mp::powm(value(base), e.value(), p_));
  }
  GroupElement mul(const GroupElement& a, const GroupElement& b) const override {
    return encode((value(a) * value(b)) % p_);
  }
  GroupElement div(const GroupElement& a, const GroupElement& b) const override {
    BigUint inv = mp::powm(value(b), p_ - 2, p_);
    return encode((value(a) * inv) % p_);
  }

  bool is_member(ByteSpan encoding) const override {
    if (encoding.size() != element_len()) return false;
    BigUint v = from_be(encoding);
    return v >= 1 && v < p_ && mp::powm(v, order(), p_) == 1;
  }

  GroupElement map_to_group(ByteSpan uniform64) const override {
    return encode(mp::powm(from_be(uniform64) % p_, cofactor_, p_));
  }

 private:
  BigUint value(const GroupElement& e) const { return from_be(e.bytes()); }
  GroupElement encode(const BigUint& v) const { return GroupElement(to_fixed_be(v, element_len())); }

  std::string name_;
  BigUint p_;
  BigUint cofactor_;
  bool insecure_;
  GroupElement generator_;
};

}  // namespace

Group::Group(BigUint order, std::size_t element_len)
    : order_(std::move(order)), element_len_(element_len), scalar_len_((bit_length(order_) + 7) / 8) {}

std::size_t Group::order_bits() const { return bit_length(order_); }

std::optional<GroupElement> Group::decode_element(ByteSpan encoding) const {
  if (!is_member(encoding)) return std::nullopt;
  return GroupElement(Bytes(encoding.begin(), encoding.end()));
}

Scalar Group::add(const Scalar& a, const Scalar& b) const { return Scalar((a.value() + b.value()) % order_); }

Scalar Group::sub(const Scalar& a, const Scalar& b) const {
  return Scalar((a.value() + order_ - b.value()) % order_);
}

Scalar Group::mul(const Scalar& a, const Scalar& b) const { return Scalar((a.value() * b.value()) % order_); }

Scalar Group::neg(const Scalar& a) const { return Scalar((order_ - a.value()) % order_); }

Scalar Group::random_scalar(Rng& rng) const {
  // 512 bits reduced mod q: bias below 2^-250 for every supported order.
  std::array<std::uint8_t, 64> buf;
  rng.fill(buf);
  return scalar(from_be(buf));
}

Scalar Group::hash_to_scalar(std::string_view domain_tag, ByteSpan transcript) const {
  ByteWriter w;
  w.prefixed(domain_tag).raw(transcript);
  Bytes digest = sha512(w.bytes());
  return scalar(from_be(digest));
}

Bytes Group::encode_scalar(const Scalar& s) const { return to_fixed_be(s.value(), scalar_len_); }

std::optional<Scalar> Group::decode_scalar(ByteSpan encoding) const {
  if (encoding.size() != scalar_len_) return std::nullopt;
  BigUint v = from_be(encoding);
  if (v >= order_) return std::nullopt;
  return Scalar(v);
}

GroupElement Group::derive_second_generator(const GroupElement& g, std::string_view label) const {
  for (std::uint32_t attempt = 0; attempt < kMaxGeneratorAttempts; ++attempt) {
    ByteWriter w;
    w.prefixed(std::string_view("zkhawk/hash-to-group/v1")).prefixed(g.bytes()).prefixed(label).u32(attempt);
    GroupElement h = map_to_group(sha512(w.bytes()));
    if (h != identity() && h != g) return h;
  }
  throw Error("derive_second_generator: no usable element after " + std::to_string(kMaxGeneratorAttempts) +
              " attempts");
}

std::shared_ptr<const Group> ristretto255_group() {
  static const auto group = std::make_shared<const Ristretto255>();
  return group;
}

std::shared_ptr<const Group> modular_group(std::string name, const BigUint& p, const BigUint& q, const BigUint& g,
                                           bool insecure) {
  return std::make_shared<const ModularGroup>(std::move(name), p, q, g, insecure);
}

GroupParams GroupParams::standard() {
  static const GroupParams params = [] {
    GroupParams out;
    out.group = ristretto255_group();
    out.g = out.group->generator();
    out.h = out.group->derive_second_generator(out.g, kPedersenHLabel);
    out.insecure_test_group = false;
    return out;
  }();
  return params;
}

GroupParams GroupParams::toy() {
  GroupParams out;
  out.group = modular_group("toy-insecure", 23, 11, 4, true);
  out.g = out.group->generator();
  out.h = *out.group->decode_element(Bytes{8});
  out.insecure_test_group = true;
  return out;
}

GroupParams GroupParams::by_name(std::string_view name) {
  if (name == "production") return standard();
  if (name == "toy-insecure") return toy();
  throw Error("unknown group: " + std::string(name));
}

}  // namespace zkhawk
