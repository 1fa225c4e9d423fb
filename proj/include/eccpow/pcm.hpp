#pragma once

// Time-variant parity-check matrix. H stacks w_c blocks: the Gallager base
// matrix A plus w_c - 1 column-permuted copies pi_1(A) ... pi_{w_c-1}(A),
// where pi_i is the seeded Fisher-Yates permutation with seed S - i + 1 and
// S is the byte sum of the previous block hash. pi(A) maps column c of A to
// column pi[c], so row i of block b has ones at { pi_b(c) : c in row i of A }.

#include <algorithm>
#include <bit>
#include <cstdint>
#include <vector>

#include "eccpow/block_header.hpp"
#include "eccpow/gf2.hpp"
#include "eccpow/prng.hpp"
#include "eccpow/util.hpp"

namespace eccpow {

struct ParityCheckMatrix {
  std::uint32_t n = 0;   // columns
  std::uint32_t m = 0;   // rows = n * w_c / w_r
  std::uint16_t w_c = 0;
  std::uint16_t w_r = 0;
  std::uint32_t source_seed = 0;  // S
  std::vector<std::vector<std::uint32_t>> rows;  // sorted column indices

  friend bool operator==(const ParityCheckMatrix&,
                         const ParityCheckMatrix&) = default;
};

inline void check_code_params(std::uint32_t n, std::uint16_t w_c,
                              std::uint16_t w_r) {
  if (!header_params_valid(n, w_c, w_r))
    throw ParameterError(
        "code parameters must satisfy w_c >= 3, w_r > w_c, w_r | n, n <= 8192");
}

// Gallager base matrix A: (n/w_r) x n, row i covering columns
// [i*w_r, (i+1)*w_r).
inline Gf2Matrix base_matrix(std::uint32_t n, std::uint16_t w_r) {
  if (w_r == 0 || n % w_r != 0 || n < w_r)
    throw ParameterError("base matrix requires w_r | n with n >= w_r");
  Gf2Matrix a(n / w_r, n);
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::uint32_t c = 0; c < w_r; ++c)
      a.set(i, i * w_r + c, true);
  return a;
}

inline ParityCheckMatrix build_pcm(const Digest& prev_hash, std::uint32_t n,
                                   std::uint16_t w_c, std::uint16_t w_r) {
  check_code_params(n, w_c, w_r);
  ParityCheckMatrix h;
  h.n = n;
  h.m = n / w_r * w_c;
  h.w_c = w_c;
  h.w_r = w_r;
  h.source_seed = seed_from_prev_hash(prev_hash);
  h.rows.reserve(h.m);

  const std::uint32_t block_rows = n / w_r;
  for (std::uint32_t i = 0; i < block_rows; ++i) {
    std::vector<std::uint32_t> row(w_r);
    for (std::uint32_t c = 0; c < w_r; ++c) row[c] = i * w_r + c;
    h.rows.push_back(std::move(row));
  }
  for (std::uint16_t b = 1; b < w_c; ++b) {
    std::int64_t seed = static_cast<std::int64_t>(h.source_seed) - b + 1;
    std::vector<std::uint32_t> perm = seeded_permutation(seed, n);
    for (std::uint32_t i = 0; i < block_rows; ++i) {
      std::vector<std::uint32_t> row(w_r);
      for (std::uint32_t c = 0; c < w_r; ++c) row[c] = perm[i * w_r + c];
      std::sort(row.begin(), row.end());
      h.rows.push_back(std::move(row));
    }
  }
  return h;
}

inline Gf2Matrix to_dense(const ParityCheckMatrix& h) {
  Gf2Matrix m(h.m, h.n);
  for (std::size_t r = 0; r < h.rows.size(); ++r)
    for (std::uint32_t c : h.rows[r]) m.set(r, c, true);
  return m;
}

struct GeneratorMatrix {
  Gf2Matrix mat;  // n rows x k' columns
  std::size_t rank = 0;
  std::size_t rank_deficiency = 0;  // rows(H) - rank(H)

  std::size_t k() const { return mat.cols(); }
};

inline GeneratorMatrix derive_generator(const Gf2Matrix& h) {
  if (h.rows() == 0 || h.cols() == 0)
    throw ParameterError("generator derivation requires a nonempty matrix");
  GeneratorMatrix g;
  g.mat = gf2_null_space(h);
  g.rank = h.cols() - g.mat.cols();
  g.rank_deficiency = h.rows() - g.rank;
  if (g.mat.cols() == 0)
    throw DegenerateCodeError("parity-check matrix has trivial null space");
  return g;
}

inline GeneratorMatrix derive_generator(const ParityCheckMatrix& h) {
  return derive_generator(to_dense(h));
}

// Minimum nonzero-codeword weight by enumerating the span of G with a
// Gray-code walk; one column XOR per visited codeword.
inline constexpr std::size_t kMinDistanceDimCap = 20;

inline std::uint32_t min_distance_bruteforce(const Gf2Matrix& h) {
  GeneratorMatrix g = derive_generator(h);
  const std::size_t kdim = g.k();
  if (kdim > kMinDistanceDimCap)
    throw CapacityError("minimum-distance enumeration capped at 2^20 codewords");

  std::vector<std::vector<std::uint64_t>> cols(kdim);
  for (std::size_t j = 0; j < kdim; ++j) cols[j] = g.mat.column_words(j);

  std::vector<std::uint64_t> word(cols[0].size(), 0);
  std::uint32_t best = static_cast<std::uint32_t>(h.cols()) + 1;
  const std::uint64_t total = std::uint64_t{1} << kdim;
  for (std::uint64_t i = 1; i < total; ++i) {
    std::size_t flip = std::countr_zero(i);
    const auto& col = cols[flip];
    std::uint32_t weight = 0;
    for (std::size_t w = 0; w < word.size(); ++w) {
      word[w] ^= col[w];
      weight += static_cast<std::uint32_t>(std::popcount(word[w]));
    }
    best = std::min(best, weight);
    if (best == 1) break;
  }
  return best;
}

inline std::uint32_t min_distance_bruteforce(const ParityCheckMatrix& h) {
  return min_distance_bruteforce(to_dense(h));
}

inline std::uint32_t correctable_errors(std::uint32_t d) {
  if (d < 1) throw ParameterError("minimum distance must be at least 1");
  return (d - 1) / 2;
}

}  // namespace eccpow
