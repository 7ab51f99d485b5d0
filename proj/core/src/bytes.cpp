#include "zkhawk/bytes.hpp"

#include <sodium.h>

#include "sodium_init.hpp"

namespace zkhawk {

std::string to_hex(ByteSpan data) {
  static constexpr char kDigits[] = "0123456789abcdef";
  std::string out;
  out.reserve(data.size() * 2);
  for (std::uint8_t b : data) {
    out.push_back(kDigits[b >> 4]);
    out.push_back(kDigits[b & 0xf]);
  }
  return out;
}

std::optional<Bytes> from_hex(std::string_view hex) {
  if (hex.size() % 2 != 0) return std::nullopt;
  auto nibble = [](char c) -> int {
    if (c >= '0' && c <= '9') return c - '0';
    if (c >= 'a' && c <= 'f') return c - 'a' + 10;
    if (c >= 'A' && c <= 'F') return c - 'A' + 10;
    return -1;
  };
  Bytes out(hex.size() / 2);
  for (std::size_t i = 0; i < out.size(); ++i) {
    int hi = nibble(hex[2 * i]);
    int lo = nibble(hex[2 * i + 1]);
    if (hi < 0 || lo < 0) return std::nullopt;
    out[i] = static_cast<std::uint8_t>((hi << 4) | lo);
  }
  return out;
}

Bytes sha256(ByteSpan data) {
  detail::ensure_sodium();
  Bytes out(crypto_hash_sha256_BYTES);
  crypto_hash_sha256(out.data(), data.data(), data.size());
  return out;
}

Bytes sha512(ByteSpan data) {
  detail::ensure_sodium();
  Bytes out(crypto_hash_sha512_BYTES);
  crypto_hash_sha512(out.data(), data.data(), data.size());
  return out;
}

ByteWriter& ByteWriter::u8(std::uint8_t v) {
  out_.push_back(v);
  return *this;
}

ByteWriter& ByteWriter::u32(std::uint32_t v) {
  for (int shift = 24; shift >= 0; shift -= 8) out_.push_back(static_cast<std::uint8_t>(v >> shift));
  return *this;
}

ByteWriter& ByteWriter::u64(std::uint64_t v) {
  for (int shift = 56; shift >= 0; shift -= 8) out_.push_back(static_cast<std::uint8_t>(v >> shift));
  return *this;
}

ByteWriter& ByteWriter::raw(ByteSpan data) {
  out_.insert(out_.end(), data.begin(), data.end());
  return *this;
}

ByteWriter& ByteWriter::prefixed(ByteSpan data) {
  if (data.size() > 0xffffffffu) throw Error("field too long for u32 length prefix");
  u32(static_cast<std::uint32_t>(data.size()));
  return raw(data);
}

std::uint8_t ByteReader::u8() { return raw(1)[0]; }

std::uint32_t ByteReader::u32() {
  auto b = raw(4);
  std::uint32_t v = 0;
  for (auto x : b) v = (v << 8) | x;
  return v;
}

std::uint64_t ByteReader::u64() {
  auto b = raw(8);
  std::uint64_t v = 0;
  for (auto x : b) v = (v << 8) | x;
  return v;
}

ByteSpan ByteReader::raw(std::size_t n) {
  if (remaining() < n) {
    throw DecodeError("truncated input: need " + std::to_string(n) + " bytes at offset " +
                      std::to_string(pos_) + ", have " + std::to_string(remaining()));
  }
  auto out = data_.subspan(pos_, n);
  pos_ += n;
  return out;
}

Bytes ByteReader::prefixed(std::size_t max_len) {
  std::uint32_t len = u32();
  if (len > max_len) {
    throw DecodeError("length prefix " + std::to_string(len) + " exceeds limit " + std::to_string(max_len));
  }
  auto b = raw(len);
  return Bytes(b.begin(), b.end());
}

std::string ByteReader::prefixed_string(std::size_t max_len) {
  Bytes b = prefixed(max_len);
  return std::string(b.begin(), b.end());
}

void ByteReader::expect_done() const {
  if (!done()) throw DecodeError(std::to_string(remaining()) + " trailing bytes");
}

}  // namespace zkhawk
