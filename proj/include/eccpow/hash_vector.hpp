#pragma once

// Hash vector r: the decoder input derived from the current block header.
// s_1 = SHA256(serialized header); s_u = SHA256(s_{u-1}) for u >= 2; r is
// the first n bits of s_1 || s_2 || ..., MSB-first within each byte.

#include <cstdint>

#include "eccpow/block_header.hpp"
#include "eccpow/sha256.hpp"
#include "eccpow/util.hpp"

namespace eccpow {

struct HashVector {
  BitVec bits;
  std::uint32_t segments_used = 0;
};

inline HashVector build_hash_vector(const BlockHeader& cbh, std::uint32_t n) {
  if (n == 0) throw ParameterError("hash vector: n must be positive");
  HashVector hv;
  hv.bits.reserve(n);
  Digest s = header_hash(cbh);
  std::uint32_t remaining = n;
  for (;;) {
    ++hv.segments_used;
    std::uint32_t take = remaining < 256 ? remaining : 256;
    for (std::uint32_t i = 0; i < take; ++i)
      hv.bits.push_back((s[i / 8] >> (7 - i % 8)) & 1u);
    remaining -= take;
    if (remaining == 0) break;
    s = Sha256::hash(s);
  }
  return hv;
}

}  // namespace eccpow
