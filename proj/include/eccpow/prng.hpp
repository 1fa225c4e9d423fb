#pragma once

// Deterministic random stream for protocol and experiment reproducibility.
// The stream is the concatenation of 32-byte blocks
//   block(t) = SHA256(seed_be8 || t_be8)
// where seed_be8 is the signed 64-bit seed in big-endian two's complement
// and t_be8 is the 64-bit block counter in big-endian. Consumers read the
// stream as bytes; multi-byte draws are big-endian.

#include <cstdint>
#include <string_view>

#include "eccpow/sha256.hpp"
#include "eccpow/util.hpp"

namespace eccpow {

class Sha256Stream {
 public:
  explicit Sha256Stream(std::int64_t seed) : seed_(seed) {}

  std::int64_t seed() const { return seed_; }

  std::uint8_t next_byte() {
    if (pos_ == 32) refill();
    return block_[pos_++];
  }

  std::uint32_t next_u32() {
    std::uint32_t v = 0;
    for (int i = 0; i < 4; ++i) v = v << 8 | next_byte();
    return v;
  }

  std::uint64_t next_u64() {
    return static_cast<std::uint64_t>(next_u32()) << 32 | next_u32();
  }

  // Uniform draw in [0, bound) via rejection sampling on 64-bit words.
  // bound <= 1 returns 0 without consuming the stream.
  std::uint64_t draw_below(std::uint64_t bound) {
    if (bound <= 1) return 0;
    const std::uint64_t limit = (~std::uint64_t{0} / bound) * bound;
    for (;;) {
      std::uint64_t w = next_u64();
      if (w < limit) return w % bound;
    }
  }

  // Next nbits stream bits, most significant bit of each byte first.
  BitVec next_bits(std::size_t nbits) {
    BitVec out(nbits);
    std::size_t i = 0;
    while (i < nbits) {
      std::uint8_t b = next_byte();
      for (int k = 7; k >= 0 && i < nbits; --k) out[i++] = (b >> k) & 1u;
    }
    return out;
  }

 private:
  void refill() {
    std::uint8_t msg[16];
    store_be64(msg, static_cast<std::uint64_t>(seed_));
    store_be64(msg + 8, counter_);
    block_ = Sha256::hash({msg, 16});
    ++counter_;
    pos_ = 0;
  }

  std::int64_t seed_;
  std::uint64_t counter_ = 0;
  Digest block_{};
  std::size_t pos_ = 32;
};

// Fisher-Yates shuffle of [0, n) driven by Sha256Stream(seed), walking
// i = n-1 down to 1 and swapping with j = draw_below(i + 1).
inline std::vector<std::uint32_t> seeded_permutation(std::int64_t seed,
                                                     std::uint32_t n) {
  std::vector<std::uint32_t> perm(n);
  for (std::uint32_t i = 0; i < n; ++i) perm[i] = i;
  Sha256Stream rng(seed);
  for (std::uint32_t i = n; i-- > 1;) {
    auto j = static_cast<std::uint32_t>(rng.draw_below(i + 1));
    std::swap(perm[i], perm[j]);
  }
  return perm;
}

// Independent child seed for parallel actors (miners, per-game streams):
// first 8 bytes of SHA256(seed_be8 || tag || index_be8), big-endian.
inline std::int64_t derive_subseed(std::int64_t seed, std::string_view tag,
                                   std::uint64_t index) {
  Sha256 h;
  std::uint8_t be[8];
  store_be64(be, static_cast<std::uint64_t>(seed));
  h.update(be, 8);
  h.update(tag.data(), tag.size());
  store_be64(be, index);
  h.update(be, 8);
  Digest d = h.finish();
  return static_cast<std::int64_t>(load_be64(d.data()));
}

}  // namespace eccpow
