#pragma once

#include <array>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace eccpow {

// 32-byte hash digest.
using Digest = std::array<std::uint8_t, 32>;

// Bit vector, one bit per element, each 0 or 1.
using BitVec = std::vector<std::uint8_t>;

// Invalid code or algorithm parameters (degrees, lengths, domains).
struct ParameterError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

// Malformed caller-supplied data (bad hex, wrong vector length, ...).
struct InputError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

// Header violates protocol invariants.
struct InvalidHeaderError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Code admits no usable codeword set (e.g. full-rank parity matrix).
struct DegenerateCodeError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Requested computation exceeds a hard enumeration cap.
struct CapacityError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Unreadable or malformed chain/config file.
struct FileFormatError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

inline std::string to_hex(std::span<const std::uint8_t> bytes) {
  static constexpr char digits[] = "0123456789abcdef";
  std::string out;
  out.reserve(bytes.size() * 2);
  for (std::uint8_t b : bytes) {
    out.push_back(digits[b >> 4]);
    out.push_back(digits[b & 0x0f]);
  }
  return out;
}

inline int hex_nibble(char c) {
  if (c >= '0' && c <= '9') return c - '0';
  if (c >= 'a' && c <= 'f') return c - 'a' + 10;
  if (c >= 'A' && c <= 'F') return c - 'A' + 10;
  return -1;
}

inline std::vector<std::uint8_t> from_hex(std::string_view hex) {
  if (hex.size() % 2 != 0)
    throw InputError("hex string has odd length");
  std::vector<std::uint8_t> out(hex.size() / 2);
  for (std::size_t i = 0; i < out.size(); ++i) {
    int hi = hex_nibble(hex[2 * i]);
    int lo = hex_nibble(hex[2 * i + 1]);
    if (hi < 0 || lo < 0)
      throw InputError("hex string has non-hex character");
    out[i] = static_cast<std::uint8_t>(hi << 4 | lo);
  }
  return out;
}

inline Digest digest_from_hex(std::string_view hex) {
  auto bytes = from_hex(hex);
  if (bytes.size() != 32)
    throw InputError("digest hex must encode exactly 32 bytes");
  Digest d{};
  std::copy(bytes.begin(), bytes.end(), d.begin());
  return d;
}

// Packs bits into bytes, most significant bit first; the last byte is
// zero-padded on the right.
inline std::vector<std::uint8_t> pack_bits_msb(const BitVec& bits) {
  std::vector<std::uint8_t> out((bits.size() + 7) / 8, 0);
  for (std::size_t i = 0; i < bits.size(); ++i) {
    if (bits[i] & 1u)
      out[i / 8] |= static_cast<std::uint8_t>(0x80u >> (i % 8));
  }
  return out;
}

inline BitVec unpack_bits_msb(std::span<const std::uint8_t> bytes,
                              std::size_t nbits) {
  if (nbits > bytes.size() * 8)
    throw InputError("not enough bytes for requested bit count");
  BitVec out(nbits);
  for (std::size_t i = 0; i < nbits; ++i)
    out[i] = (bytes[i / 8] >> (7 - i % 8)) & 1u;
  return out;
}

inline void store_be32(std::uint8_t* p, std::uint32_t v) {
  p[0] = static_cast<std::uint8_t>(v >> 24);
  p[1] = static_cast<std::uint8_t>(v >> 16);
  p[2] = static_cast<std::uint8_t>(v >> 8);
  p[3] = static_cast<std::uint8_t>(v);
}

inline void store_be64(std::uint8_t* p, std::uint64_t v) {
  store_be32(p, static_cast<std::uint32_t>(v >> 32));
  store_be32(p + 4, static_cast<std::uint32_t>(v));
}

inline void store_be16(std::uint8_t* p, std::uint16_t v) {
  p[0] = static_cast<std::uint8_t>(v >> 8);
  p[1] = static_cast<std::uint8_t>(v);
}

inline std::uint32_t load_be32(const std::uint8_t* p) {
  return static_cast<std::uint32_t>(p[0]) << 24 |
         static_cast<std::uint32_t>(p[1]) << 16 |
         static_cast<std::uint32_t>(p[2]) << 8 | static_cast<std::uint32_t>(p[3]);
}

inline std::uint64_t load_be64(const std::uint8_t* p) {
  return static_cast<std::uint64_t>(load_be32(p)) << 32 | load_be32(p + 4);
}

inline std::uint16_t load_be16(const std::uint8_t* p) {
  return static_cast<std::uint16_t>(p[0] << 8 | p[1]);
}

}  // namespace eccpow
