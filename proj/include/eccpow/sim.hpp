#pragma once

// Mining games and chain-growth simulation. Miners advance in lockstep
// logical rounds (one hash cycle per miner per round), so "equal computing
// capacity" is exact and every result is a pure function of the seed.

#include <cstdint>
#include <string_view>
#include <vector>

#include "eccpow/analysis.hpp"
#include "eccpow/block_header.hpp"
#include "eccpow/chain_config.hpp"
#include "eccpow/decoder.hpp"
#include "eccpow/pcm.hpp"
#include "eccpow/prng.hpp"
#include "eccpow/puzzle.hpp"

namespace eccpow {

inline constexpr std::uint64_t kDefaultGameCap = std::uint64_t{1} << 32;
inline constexpr std::uint64_t kSimGenesisTimestamp = 1700000000;

struct GameResult {
  std::uint64_t rounds = 0;  // FSHC sample: round index of the first success
  std::uint32_t winner = 0;  // lowest miner index on a tied round
  std::uint32_t nonce = 0;
  BitVec word;
  bool capped = false;  // safety cap hit before any success
};

// M miners race on one (H, template) instance. Miner i draws nonces from
// the stream seeded by miner_stream_seed(rng_seed, i); the game ends at the
// first round in which any miner's hash cycle succeeds.
inline GameResult run_mining_game(const ParityCheckMatrix& h,
                                  const BlockHeader& cbh_template,
                                  std::uint32_t miners,
                                  const DecoderParams& params,
                                  std::int64_t rng_seed,
                                  std::uint64_t max_rounds = kDefaultGameCap) {
  if (miners < 1) throw ParameterError("mining game requires M >= 1");
  if (h.n != cbh_template.n || h.w_c != cbh_template.w_c ||
      h.w_r != cbh_template.w_r)
    throw InputError("mining game: H does not match the template");

  std::vector<Sha256Stream> streams;
  streams.reserve(miners);
  for (std::uint32_t i = 0; i < miners; ++i)
    streams.emplace_back(miner_stream_seed(rng_seed, i));

  MinSumDecoder decoder(h, params);
  BlockHeader header = cbh_template;
  GameResult res;
  for (std::uint64_t round = 1; round <= max_rounds; ++round) {
    for (std::uint32_t i = 0; i < miners; ++i) {
      header.nonce = streams[i].next_u32();
      HashVector r = build_hash_vector(header, header.n);
      DecoderOutput out = decoder.decode(r.bits);
      if (out.converged) {
        res.rounds = round;
        res.winner = i;
        res.nonce = header.nonce;
        res.word = std::move(out.word);
        return res;
      }
    }
  }
  res.rounds = max_rounds;
  res.capped = true;
  return res;
}

inline Digest sim_digest(std::int64_t seed, std::string_view tag,
                         std::uint64_t index = 0) {
  Sha256 h;
  std::uint8_t be[8];
  store_be64(be, static_cast<std::uint64_t>(seed));
  h.update(be, 8);
  h.update(tag.data(), tag.size());
  store_be64(be, index);
  h.update(be, 8);
  return h.finish();
}

// A fixed mining instance for experiments: code length taken from the first
// difficulty level, header fields derived from the seed.
inline BlockHeader experiment_template(const ChainConfig& cfg,
                                       std::int64_t seed) {
  BlockHeader tmpl;
  tmpl.version = 1;
  tmpl.prev_hash = sim_digest(seed, "prev");
  tmpl.merkle_root = sim_digest(seed, "merkle");
  tmpl.timestamp = kSimGenesisTimestamp;
  tmpl.n = cfg.difficulty_levels.front();
  tmpl.w_c = cfg.w_c;
  tmpl.w_r = cfg.w_r;
  return tmpl;
}

struct MiningGameReport {
  std::uint32_t n = 0;
  std::uint16_t w_c = 0;
  std::uint16_t w_r = 0;
  std::uint32_t miners = 0;
  DecoderParams params;
  std::vector<std::uint64_t> samples;
  PEstimate p_est;       // decoder DS probability backing the theory column
  double mean = 0;       // empirical FSHC mean
  double variance = 0;   // unbiased sample variance
  FshcStats theory;      // geometric-law statistics at p_est.p_hat
  GofResult gof;
};

// Batch harness: one shared (H, template) instance, `games` independent
// games per miner count, geometric fit attached.
inline std::vector<MiningGameReport> run_experiment(
    const ChainConfig& cfg, std::uint64_t games,
    std::span<const std::uint32_t> m_list, std::int64_t seed,
    std::uint64_t p_trials = 100000) {
  check_config(cfg);
  if (games < 100) throw InputError("experiment requires games >= 100");
  if (m_list.empty()) throw InputError("experiment requires a miner list");

  BlockHeader tmpl = experiment_template(cfg, seed);
  ParityCheckMatrix h = build_pcm(tmpl.prev_hash, tmpl.n, tmpl.w_c, tmpl.w_r);
  DecoderParams params = decoder_params(cfg);
  PEstimate p_est =
      estimate_p(h, params, p_trials, derive_subseed(seed, "ptrials", 0));

  std::vector<MiningGameReport> reports;
  for (std::uint32_t miners : m_list) {
    MiningGameReport rep;
    rep.n = tmpl.n;
    rep.w_c = tmpl.w_c;
    rep.w_r = tmpl.w_r;
    rep.miners = miners;
    rep.params = params;
    rep.p_est = p_est;
    rep.samples.reserve(games);
    double sum = 0;
    for (std::uint64_t g = 0; g < games; ++g) {
      std::int64_t game_seed = derive_subseed(
          seed, "game", static_cast<std::uint64_t>(miners) << 32 | g);
      GameResult res = run_mining_game(h, tmpl, miners, params, game_seed);
      if (res.capped)
        throw CapacityError("mining game exceeded the round cap");
      rep.samples.push_back(res.rounds);
      sum += static_cast<double>(res.rounds);
    }
    rep.mean = sum / static_cast<double>(games);
    double ss = 0;
    for (std::uint64_t s : rep.samples) {
      double d = static_cast<double>(s) - rep.mean;
      ss += d * d;
    }
    rep.variance = games > 1 ? ss / static_cast<double>(games - 1) : 0.0;
    rep.theory = fshc_stats(p_est.p_hat, miners);
    rep.gof = geometric_gof(rep.samples);
    reports.push_back(std::move(rep));
  }
  return reports;
}

struct ChainSimReport {
  std::vector<Block> blocks;
  std::vector<std::uint64_t> cycles;      // rounds spent per block
  std::vector<std::uint32_t> seed_sums;   // S entering each block's PCM
  std::vector<std::size_t> level_indices; // difficulty level used per block
  std::uint32_t seed_collisions = 0;      // consecutive blocks sharing S
};

// Mines num_blocks in sequence. The logical clock advances one second per
// hash cycle, so target_block_seconds is compared directly against mean
// cycles per block. Every retarget_window blocks the difficulty moves one
// level up if the window averaged under half the target, one level down if
// over twice the target.
inline ChainSimReport simulate_chain(const ChainConfig& cfg,
                                     std::uint64_t num_blocks,
                                     std::uint32_t miners, std::int64_t seed) {
  check_config(cfg);
  if (num_blocks < 1)
    throw ParameterError("chain simulation requires num_blocks >= 1");

  DecoderParams params = decoder_params(cfg);
  ChainSimReport report;
  Digest prev_hash{};  // genesis links to the zero digest
  std::uint64_t clock = kSimGenesisTimestamp;
  std::size_t level = 0;
  std::uint64_t window_cycles = 0;

  for (std::uint64_t height = 0; height < num_blocks; ++height) {
    BlockHeader tmpl;
    tmpl.version = 1;
    tmpl.prev_hash = prev_hash;
    tmpl.merkle_root = sim_digest(seed, "merkle", height);
    tmpl.timestamp = clock;
    tmpl.n = cfg.difficulty_levels[level];
    tmpl.w_c = cfg.w_c;
    tmpl.w_r = cfg.w_r;

    ParityCheckMatrix h = build_pcm(prev_hash, tmpl.n, tmpl.w_c, tmpl.w_r);
    GameResult game = run_mining_game(h, tmpl, miners, params,
                                      derive_subseed(seed, "block", height));
    if (game.capped)
      throw CapacityError("mining game exceeded the round cap");

    std::uint32_t s = seed_from_prev_hash(prev_hash);
    if (height > 0 && s == report.seed_sums.back()) ++report.seed_collisions;
    report.seed_sums.push_back(s);

    Block block;
    block.header = tmpl;
    block.header.nonce = game.nonce;
    block.height = height;
    block.solution_word = std::move(game.word);
    prev_hash = header_hash(block.header);
    report.blocks.push_back(std::move(block));
    report.cycles.push_back(game.rounds);
    report.level_indices.push_back(level);

    clock += game.rounds;
    window_cycles += game.rounds;
    if ((height + 1) % cfg.retarget_window == 0) {
      double mean_cycles = static_cast<double>(window_cycles) /
                           static_cast<double>(cfg.retarget_window);
      double target = static_cast<double>(cfg.target_block_seconds);
      if (mean_cycles < 0.5 * target) {
        if (level + 1 < cfg.difficulty_levels.size()) ++level;
      } else if (mean_cycles > 2.0 * target) {
        if (level > 0) --level;
      }
      window_cycles = 0;
    }
  }
  return report;
}

}  // namespace eccpow
