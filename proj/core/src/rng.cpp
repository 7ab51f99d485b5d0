#include "zkhawk/rng.hpp"

#include <sodium.h>

#include <algorithm>

#include "sodium_init.hpp"
#include "zkhawk/bytes.hpp"

namespace zkhawk {

namespace {

Rng::Key key_from_hash(ByteSpan material) {
  Bytes digest = sha256(material);
  Rng::Key key;
  std::copy(digest.begin(), digest.end(), key.begin());
  return key;
}

}  // namespace

Rng::Rng(std::uint64_t seed) {
  ByteWriter w;
  w.prefixed(std::string_view("zkhawk/rng/seed/v1")).u64(seed);
  key_ = key_from_hash(w.bytes());
}

Rng Rng::from_entropy() {
  detail::ensure_sodium();
  Key key;
  randombytes_buf(key.data(), key.size());
  return Rng(key);
}

Rng Rng::fork(std::string_view label) const {
  ByteWriter w;
  w.prefixed(std::string_view("zkhawk/rng/fork/v1")).raw(key_).prefixed(label);
  return Rng(key_from_hash(w.bytes()));
}

void Rng::refill() {
  detail::ensure_sodium();
  // The 96-bit nonce carries a rekey counter so the stream never wraps the
  // 32-bit block counter.
  if (counter_ == 0xffffffffu) {
    counter_ = 0;
    ++rekeys_;
  }
  std::array<std::uint8_t, crypto_stream_chacha20_ietf_NONCEBYTES> nonce{};
  for (int i = 0; i < 8; ++i) nonce[4 + i] = static_cast<std::uint8_t>(rekeys_ >> (56 - 8 * i));
  std::array<std::uint8_t, 64> zeros{};
  crypto_stream_chacha20_ietf_xor_ic(block_.data(), zeros.data(), zeros.size(), nonce.data(), counter_++,
                                     key_.data());
  used_ = 0;
}

void Rng::fill(std::span<std::uint8_t> out) {
  std::size_t pos = 0;
  while (pos < out.size()) {
    if (used_ == block_.size()) refill();
    std::size_t n = std::min(out.size() - pos, block_.size() - used_);
    std::copy_n(block_.begin() + static_cast<std::ptrdiff_t>(used_), n, out.begin() + static_cast<std::ptrdiff_t>(pos));
    used_ += n;
    pos += n;
  }
}

std::uint64_t Rng::next_u64() {
  std::array<std::uint8_t, 8> b;
  fill(b);
  std::uint64_t v = 0;
  for (auto x : b) v = (v << 8) | x;
  return v;
}

bool Rng::next_bit() {
  std::array<std::uint8_t, 1> b;
  fill(b);
  return (b[0] & 1) != 0;
}

}  // namespace zkhawk
