#pragma once

#include <algorithm>
#include <array>
#include <cstdint>
#include <string>

#include "eccpow/sha256.hpp"
#include "eccpow/util.hpp"

namespace eccpow {

inline constexpr std::size_t kHeaderBytes = 88;
inline constexpr std::uint32_t kMaxCodeLength = 8192;
inline constexpr std::uint16_t kMinColDegree = 3;

struct BlockHeader {
  std::uint32_t version = 0;
  Digest prev_hash{};
  Digest merkle_root{};
  std::uint64_t timestamp = 0;  // Unix seconds
  std::uint32_t n = 0;          // code length
  std::uint16_t w_c = 0;        // column degree
  std::uint16_t w_r = 0;        // row degree
  std::uint32_t nonce = 0;

  friend bool operator==(const BlockHeader&, const BlockHeader&) = default;
};

// Degree/divisibility rules every protocol header must satisfy.
inline bool header_params_valid(std::uint32_t n, std::uint16_t w_c,
                                std::uint16_t w_r) {
  return w_c >= kMinColDegree && w_r > w_c && w_r != 0 && n % w_r == 0 &&
         n >= w_r && n <= kMaxCodeLength;
}

inline bool header_valid(const BlockHeader& h) {
  return header_params_valid(h.n, h.w_c, h.w_r);
}

inline void check_header(const BlockHeader& h) {
  if (h.w_c < kMinColDegree)
    throw InvalidHeaderError("header rejected: w_c must be at least 3");
  if (h.w_r <= h.w_c)
    throw InvalidHeaderError("header rejected: w_r must exceed w_c");
  if (h.n % h.w_r != 0 || h.n < h.w_r)
    throw InvalidHeaderError("header rejected: w_r must divide n, n >= w_r");
  if (h.n > kMaxCodeLength)
    throw InvalidHeaderError("header rejected: n exceeds cap of 8192");
}

// Canonical byte layout, big-endian fixed-width fields:
//   version(4) || prev_hash(32) || merkle_root(32) || timestamp(8) ||
//   n(4) || w_c(2) || w_r(2) || nonce(4)
// Pure layout function; protocol paths reject invalid headers via
// check_header before hashing.
inline std::array<std::uint8_t, kHeaderBytes> serialize_header(
    const BlockHeader& h) {
  std::array<std::uint8_t, kHeaderBytes> out{};
  store_be32(out.data(), h.version);
  std::copy(h.prev_hash.begin(), h.prev_hash.end(), out.data() + 4);
  std::copy(h.merkle_root.begin(), h.merkle_root.end(), out.data() + 36);
  store_be64(out.data() + 68, h.timestamp);
  store_be32(out.data() + 76, h.n);
  store_be16(out.data() + 80, h.w_c);
  store_be16(out.data() + 82, h.w_r);
  store_be32(out.data() + 84, h.nonce);
  return out;
}

inline Digest header_hash(const BlockHeader& h) {
  auto bytes = serialize_header(h);
  return Sha256::hash(bytes);
}

// Seed S is the byte sum of the previous block hash, 0..8160.
inline std::uint32_t seed_from_prev_hash(const Digest& pbhv) {
  std::uint32_t s = 0;
  for (std::uint8_t b : pbhv) s += b;
  return s;
}

struct Block {
  BlockHeader header;
  std::uint64_t height = 0;
  BitVec solution_word;  // audit copy of the decoder output; never trusted

  friend bool operator==(const Block&, const Block&) = default;
};

}  // namespace eccpow
