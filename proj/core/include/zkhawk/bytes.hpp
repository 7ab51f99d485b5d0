#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace zkhawk {

using Bytes = std::vector<std::uint8_t>;
using ByteSpan = std::span<const std::uint8_t>;

// Base class for every error this library throws. Protocol-level rejections
// (a blockchain refusing a message, M aborting) are values, not exceptions.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Raised when canonical bytes cannot be parsed.
class DecodeError : public Error {
 public:
  using Error::Error;
};

std::string to_hex(ByteSpan data);
std::optional<Bytes> from_hex(std::string_view hex);

inline ByteSpan as_bytes(std::string_view s) {
  return {reinterpret_cast<const std::uint8_t*>(s.data()), s.size()};
}

Bytes sha256(ByteSpan data);
Bytes sha512(ByteSpan data);

// Canonical binary writer. Integers are big-endian; variable-length fields
// carry a u32 length prefix.
class ByteWriter {
 public:
  ByteWriter& u8(std::uint8_t v);
  ByteWriter& u32(std::uint32_t v);
  ByteWriter& u64(std::uint64_t v);
  ByteWriter& raw(ByteSpan data);
  ByteWriter& prefixed(ByteSpan data);
  ByteWriter& prefixed(std::string_view s) { return prefixed(as_bytes(s)); }

  const Bytes& bytes() const { return out_; }
  Bytes take() { return std::move(out_); }

 private:
  Bytes out_;
};

// Reader over canonical bytes; every accessor throws DecodeError on underflow
// or when a length prefix exceeds `max_len`.
class ByteReader {
 public:
  explicit ByteReader(ByteSpan data) : data_(data) {}

  std::uint8_t u8();
  std::uint32_t u32();
  std::uint64_t u64();
  ByteSpan raw(std::size_t n);
  Bytes prefixed(std::size_t max_len = kDefaultMaxField);
  std::string prefixed_string(std::size_t max_len = kDefaultMaxField);

  std::size_t remaining() const { return data_.size() - pos_; }
  bool done() const { return pos_ == data_.size(); }
  void expect_done() const;

  static constexpr std::size_t kDefaultMaxField = std::size_t{1} << 24;

 private:
  ByteSpan data_;
  std::size_t pos_ = 0;
};

}  // namespace zkhawk
