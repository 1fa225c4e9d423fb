#pragma once

// The ECC puzzle: find a nonce whose hash vector decodes to a codeword of
// the block's parity-check matrix. One hash cycle = nonce draw + hash
// vector + decode + syndrome check.

#include <cstdint>
#include <ctime>
#include <optional>
#include <thread>
#include <vector>

#include "eccpow/chain_config.hpp"
#include "eccpow/decoder.hpp"
#include "eccpow/hash_vector.hpp"
#include "eccpow/pcm.hpp"
#include "eccpow/prng.hpp"

namespace eccpow {

inline DecoderParams decoder_params(const ChainConfig& cfg) {
  return DecoderParams{cfg.max_iter, cfg.epsilon_num, cfg.epsilon_den,
                       cfg.llr_scale};
}

enum class NonceOrderKind { kSequential, kRandom };

struct NonceOrder {
  NonceOrderKind kind = NonceOrderKind::kSequential;
  std::int64_t seed = 0;

  static NonceOrder sequential() { return {}; }
  static NonceOrder random(std::int64_t seed) {
    return {NonceOrderKind::kRandom, seed};
  }
};

inline constexpr std::uint64_t kNonceSpace = std::uint64_t{1} << 32;

struct SolveOptions {
  NonceOrder order{};
  std::uint64_t budget = kNonceSpace;  // max hash cycles across all workers
  unsigned workers = 1;
  std::uint32_t batch_size = 1024;  // window of positions per worker
};

struct PuzzleSolution {
  std::uint32_t nonce = 0;
  BitVec word;
  std::uint64_t cycles_spent = 0;  // lockstep cycle index of the winning draw
};

// Worker w's nonce stream in random order; also the per-miner stream of the
// mining game, so solve with one worker replays miner 0 of an M=1 game.
inline std::int64_t miner_stream_seed(std::int64_t seed, std::uint32_t index) {
  return derive_subseed(seed, "miner", index);
}

inline BitVec eccpgf(const BlockHeader& cbh_template, std::uint32_t nonce,
                     const ParityCheckMatrix& h, const DecoderParams& params) {
  if (h.n != cbh_template.n || h.w_c != cbh_template.w_c ||
      h.w_r != cbh_template.w_r)
    throw InputError("eccpgf: H does not match the template's code parameters");
  BlockHeader header = cbh_template;
  header.nonce = nonce;
  HashVector r = build_hash_vector(header, header.n);
  MinSumDecoder d(h, params);
  return d.decode(r.bits).word;
}

namespace detail {

struct WorkerHit {
  bool found = false;
  std::uint32_t nonce = 0;
  std::uint64_t position = 0;  // q: index within this worker's sequence
  BitVec word;
};

// Scans worker w's positions [q_begin, q_end) and stops at the worker's
// first success. If no success, a random-order stream is advanced by
// exactly q_end - q_begin draws, keeping later windows deterministic.
inline void scan_positions(const BlockHeader& tmpl, const ParityCheckMatrix& h,
                           const DecoderParams& params, const NonceOrder& order,
                           unsigned workers, unsigned w, std::uint64_t q_begin,
                           std::uint64_t q_end, Sha256Stream* stream,
                           WorkerHit* hit) {
  MinSumDecoder decoder(h, params);
  BlockHeader header = tmpl;
  for (std::uint64_t q = q_begin; q < q_end; ++q) {
    std::uint32_t nonce;
    if (order.kind == NonceOrderKind::kSequential)
      nonce = static_cast<std::uint32_t>(q * workers + w);
    else
      nonce = stream->next_u32();
    header.nonce = nonce;
    HashVector r = build_hash_vector(header, header.n);
    DecoderOutput out = decoder.decode(r.bits);
    if (out.converged) {
      hit->found = true;
      hit->nonce = nonce;
      hit->position = q;
      hit->word = std::move(out.word);
      return;
    }
  }
}

}  // namespace detail

// Searches the nonce space in lockstep strides across workers: worker w
// tries position q as global cycle q*workers + w. Workers complete a whole
// batch window before a winner is chosen, and the smallest nonce among that
// window's hits wins, so the result is independent of thread scheduling.
inline std::optional<PuzzleSolution> solve(const BlockHeader& cbh_template,
                                           const ParityCheckMatrix& h,
                                           const DecoderParams& params,
                                           const SolveOptions& opts = {}) {
  if (h.n != cbh_template.n || h.w_c != cbh_template.w_c ||
      h.w_r != cbh_template.w_r)
    throw InputError("solve: H does not match the template's code parameters");
  const unsigned workers = opts.workers == 0 ? 1 : opts.workers;
  const std::uint64_t batch = opts.batch_size == 0 ? 1 : opts.batch_size;

  // Positions each worker may scan under the cycle budget and, for
  // sequential order, the 32-bit nonce space.
  std::vector<std::uint64_t> limit(workers, 0);
  for (unsigned w = 0; w < workers; ++w) {
    std::uint64_t by_budget =
        opts.budget > w ? (opts.budget - 1 - w) / workers + 1 : 0;
    if (opts.order.kind == NonceOrderKind::kSequential) {
      std::uint64_t by_space =
          w < kNonceSpace ? (kNonceSpace - 1 - w) / workers + 1 : 0;
      limit[w] = std::min(by_budget, by_space);
    } else {
      limit[w] = by_budget;
    }
  }

  std::vector<Sha256Stream> streams;
  if (opts.order.kind == NonceOrderKind::kRandom)
    for (unsigned w = 0; w < workers; ++w)
      streams.emplace_back(miner_stream_seed(opts.order.seed, w));

  std::uint64_t max_limit = 0;
  for (std::uint64_t l : limit) max_limit = std::max(max_limit, l);

  for (std::uint64_t q0 = 0; q0 < max_limit; q0 += batch) {
    std::vector<detail::WorkerHit> hits(workers);
    if (workers == 1) {
      detail::scan_positions(cbh_template, h, params, opts.order, 1, 0, q0,
                             std::min(q0 + batch, limit[0]),
                             streams.empty() ? nullptr : &streams[0], &hits[0]);
    } else {
      std::vector<std::thread> pool;
      pool.reserve(workers);
      for (unsigned w = 0; w < workers; ++w) {
        std::uint64_t q_end = std::min(q0 + batch, limit[w]);
        std::uint64_t q_begin = std::min(q0, q_end);
        pool.emplace_back(detail::scan_positions, std::cref(cbh_template),
                          std::cref(h), std::cref(params),
                          std::cref(opts.order), workers, w, q_begin, q_end,
                          streams.empty() ? nullptr : &streams[w], &hits[w]);
      }
      for (auto& t : pool) t.join();
    }
    const detail::WorkerHit* best = nullptr;
    unsigned best_w = 0;
    for (unsigned w = 0; w < workers; ++w) {
      if (hits[w].found && (!best || hits[w].nonce < best->nonce)) {
        best = &hits[w];
        best_w = w;
      }
    }
    if (best) {
      PuzzleSolution sol;
      sol.nonce = best->nonce;
      sol.word = best->word;
      sol.cycles_spent = best->position * workers + best_w + 1;
      return sol;
    }
  }
  return std::nullopt;
}

// Restarts the search space: bumps the timestamp past both the clock and
// the old value, and resets the nonce. The caller may swap in a fresh
// merkle_root as well.
inline BlockHeader refresh_template(BlockHeader cbh_template,
                                    std::uint64_t now_unix_seconds) {
  cbh_template.timestamp =
      std::max(now_unix_seconds, cbh_template.timestamp + 1);
  cbh_template.nonce = 0;
  return cbh_template;
}

inline BlockHeader refresh_template(BlockHeader cbh_template) {
  return refresh_template(std::move(cbh_template),
                          static_cast<std::uint64_t>(std::time(nullptr)));
}

enum class VerifyStatus {
  kOk,
  kParameterMismatch,  // header invalid or (n, w_c, w_r) not in config
  kNotSolved,          // well-formed but the decoder finds no codeword
};

// One hash cycle of work: rebuild H and r, decode once.
inline VerifyStatus verify_header(const BlockHeader& h,
                                  const ChainConfig& cfg) {
  if (!header_valid(h)) return VerifyStatus::kParameterMismatch;
  if (h.w_c != cfg.w_c || h.w_r != cfg.w_r || !cfg.has_level(h.n))
    return VerifyStatus::kParameterMismatch;
  ParityCheckMatrix pcm = build_pcm(h.prev_hash, h.n, h.w_c, h.w_r);
  HashVector r = build_hash_vector(h, h.n);
  DecoderOutput out = decode(pcm, r.bits, decoder_params(cfg));
  return out.converged && is_codeword(pcm, out.word) ? VerifyStatus::kOk
                                                     : VerifyStatus::kNotSolved;
}

inline bool verify(const BlockHeader& h, const ChainConfig& cfg) {
  return verify_header(h, cfg) == VerifyStatus::kOk;
}

}  // namespace eccpow
